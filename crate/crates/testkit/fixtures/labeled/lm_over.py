"""Update loop one line over the function length limit."""

def update(state):
    step_0 = 0
    step_1 = step_0 + 1
    step_2 = step_1 + 1

    step_3 = step_2 + 1
    step_4 = step_3 + 1
    # stage 5
    step_5 = step_4 + 1
    step_6 = step_5 + 1
    step_7 = step_6 + 1
    step_8 = step_7 + 1
    step_9 = step_8 + 1

    step_10 = step_9 + 1
    step_11 = step_10 + 1
    step_12 = step_11 + 1
    step_13 = step_12 + 1
    # stage 14
    step_14 = step_13 + 1
    step_15 = step_14 + 1
    step_16 = step_15 + 1

    step_17 = step_16 + 1
    step_18 = step_17 + 1
    step_19 = step_18 + 1
    step_20 = step_19 + 1
    step_21 = step_20 + 1
    step_22 = step_21 + 1
    # stage 23
    step_23 = step_22 + 1

    step_24 = step_23 + 1
    step_25 = step_24 + 1
    step_26 = step_25 + 1
    step_27 = step_26 + 1
    step_28 = step_27 + 1
    step_29 = step_28 + 1
    step_30 = step_29 + 1

    step_31 = step_30 + 1
    # stage 32
    step_32 = step_31 + 1
    step_33 = step_32 + 1
    step_34 = step_33 + 1
    step_35 = step_34 + 1
    step_36 = step_35 + 1
    return step_36
