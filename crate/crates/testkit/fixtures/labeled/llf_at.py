greedy = lambda s: max(qqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqq)
