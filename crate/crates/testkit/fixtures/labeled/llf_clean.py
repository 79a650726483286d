greedy = lambda s: max(s)
