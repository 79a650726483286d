def reset(env):
    env.reset()
    return 0


def act(q, s):
    return max(q[s])
