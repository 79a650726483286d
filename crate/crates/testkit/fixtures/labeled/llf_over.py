greedy = lambda s: max(qqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqqq)
