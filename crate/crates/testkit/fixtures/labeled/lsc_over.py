def outer():
    def middle():
        def inner():
            def innermost():
                return 1
            return innermost
        return inner
    return middle
