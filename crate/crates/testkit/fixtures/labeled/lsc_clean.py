def flat():
    return 1
