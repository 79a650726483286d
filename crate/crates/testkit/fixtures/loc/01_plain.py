def add(a, b):
    return a + b


def sub(a, b):
    # difference
    result = a - b

    return result
