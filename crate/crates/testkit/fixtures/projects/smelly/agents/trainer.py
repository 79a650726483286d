def train(env, agent, episodes):
    """Run training episodes."""
    reward_0 = env.step(0)
    reward_1 = env.step(1)
    reward_2 = env.step(2)
    reward_3 = env.step(3)
    reward_4 = env.step(4)
    reward_5 = env.step(5)
    reward_6 = env.step(6)
    reward_7 = env.step(7)
    reward_8 = env.step(8)
    reward_9 = env.step(9)
    reward_10 = env.step(10)
    reward_11 = env.step(11)
    reward_12 = env.step(12)
    reward_13 = env.step(13)
    reward_14 = env.step(14)
    reward_15 = env.step(15)
    reward_16 = env.step(16)
    reward_17 = env.step(17)
    reward_18 = env.step(18)
    reward_19 = env.step(19)
    reward_20 = env.step(20)
    reward_21 = env.step(21)
    reward_22 = env.step(22)
    reward_23 = env.step(23)
    reward_24 = env.step(24)
    reward_25 = env.step(25)
    reward_26 = env.step(26)
    reward_27 = env.step(27)
    reward_28 = env.step(28)
    reward_29 = env.step(29)
    reward_30 = env.step(30)
    reward_31 = env.step(31)
    reward_32 = env.step(32)
    reward_33 = env.step(33)
    reward_34 = env.step(34)
    reward_35 = env.step(35)
    reward_36 = env.step(36)
    reward_37 = env.step(37)
    reward_38 = env.step(38)
    reward_39 = env.step(39)
    return agent
