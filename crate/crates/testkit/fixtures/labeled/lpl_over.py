def learn(state, action, reward, next_state, done, gamma=0.99):
    return reward * gamma
