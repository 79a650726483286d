def policy(q, state):
    return q[state]
