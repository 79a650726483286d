def greedy(q, s):
    return max(range(len(q[s])), key=lambda a: q[s][a])
