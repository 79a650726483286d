class Memory:
    def __init__(self):
        self.items = []
