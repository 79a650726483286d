# module header
# more header

def noisy():
    # one
    a = 1  # trailing
    # two

    # three
    b = 2
    return a + b
# after
