def outer(x):
    def middle(y):

        def inner(z):
            return x + y + z
        # done with inner
        return inner

    return middle
