def target(gamma, done, reward, rrrrrrrrrrrrrrrrrrrrrrrrrr):
    return gamma * rrrrrrrrrrrrrrrrrrrrrrrrrr if done else reward
