def target(gamma, done, reward):
    return 0 if done else reward
