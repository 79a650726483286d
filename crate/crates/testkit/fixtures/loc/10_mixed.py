"""Tabular Q-learning."""
import random

ALPHA = 0.1


class QTable:
    def __init__(self, n_states, n_actions):
        self.q = [[0.0] * n_actions for _ in range(n_states)]

    def best(self, s):
        row = self.q[s]
        return row.index(max(row))

    def update(self, s, a, r, s2):
        target = r + 0.9 * max(self.q[s2])
        self.q[s][a] += ALPHA * (target - self.q[s][a])


def choose(table, s, eps=0.1):
    if random.random() < eps:
        return random.randrange(len(table.q[s]))
    return table.best(s)
