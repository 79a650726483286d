# Agent at the class length limit

class Agent:
    def method_0(self, x):
        y = x * 1
        z = y + 0
        return z

    def method_1(self, x):
        y = x * 2
        z = y + 1
        return z

    def method_2(self, x):
        y = x * 3
        z = y + 2
        return z

    def method_3(self, x):
        y = x * 4
        z = y + 3
        return z

    def method_4(self, x):
        y = x * 5
        z = y + 4
        return z

    def method_5(self, x):
        y = x * 6
        z = y + 5
        return z

    def method_6(self, x):
        y = x * 7
        z = y + 6
        return z

