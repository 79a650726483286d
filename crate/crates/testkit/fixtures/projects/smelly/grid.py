LAYOUT = [[[(0, 0), (0, 1)], [(1, 0)]], [[(1, 1)]]]


def size():
    return len(LAYOUT)
