class Buffer:
    """Replay buffer."""

    def __init__(self, size):
        self.size = size
        self.items = []

    # insertion
    def push(self, item):
        self.items.append(item)
        if len(self.items) > self.size:
            self.items.pop(0)
