def target(gamma, done, reward, rrrrrrrrrrrrrrrrrrrrrrrrrrr):
    return gamma * rrrrrrrrrrrrrrrrrrrrrrrrrrr if done else reward
