class A:
    x = 1


class B(A):
    def f(self):
        return self.x

    class Inner:
        def g(self):
            return 2
