def loop(env, steps):
    total = 0
    for _ in range(steps):
        obs = env.step()
        if obs is None:
            break
        elif obs < 0:
            continue
        else:
            total += obs
    while total > 100:
        total -= 1
    try:
        env.close()
    except Exception:
        pass
    return total
