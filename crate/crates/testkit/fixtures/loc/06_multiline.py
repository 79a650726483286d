def configure(alpha,
              beta,
              gamma=0.9):
    params = dict(
        alpha=alpha,
        beta=beta,
    )
    return params
