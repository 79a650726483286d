ACTIONS = [0, 1, 2, 3]
