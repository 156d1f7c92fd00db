"""Frozen reference matrices for the error transfer at s = 1..4.

H uses the stability-recursion deposit placement (rows l-1..s-1 of column
l-1, value 2*c_{p+1,l-1}); the s=4 level-2 coupling is 48 = 2*24 in both
G and H.
"""

C_STEPS = {
    1: [
        [[0, 1], [1, 1]],
        [[0, 0], [0, 1]],
    ],
    2: [
        [[0, 4, 2], [4, 4, 2], [2, 2, 1]],
        [[0, 0, 0], [0, 0, 2], [0, 2, 1]],
        [[0, 0, 0], [0, 0, 0], [0, 0, 1]],
    ],
    3: [
        [[0, 36, 18, 6], [36, 36, 18, 6], [18, 18, 9, 3], [6, 6, 3, 1]],
        [[0, 0, 0, 0], [0, 0, 12, 6], [0, 12, 9, 3], [0, 6, 3, 1]],
        [[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, -3, 3], [0, 0, 3, 1]],
    ],
    4: [
        [[0, 576, 288, 96, 24], [576, 576, 288, 96, 24], [288, 288, 144, 48, 12],
         [96, 96, 48, 16, 4], [24, 24, 12, 4, 1]],
        [[0, 0, 0, 0, 0], [0, 0, 192, 72, 24], [0, 192, 144, 48, 12],
         [0, 72, 48, 16, 4], [0, 24, 12, 4, 1]],
        [[0, 0, 0, 0, 0], [0, 0, 0, 0, 0], [0, 0, 0, 24, 12],
         [0, 0, 24, 16, 4], [0, 0, 12, 4, 1]],
        [[0, 0, 0, 0, 0], [0, 0, 0, 0, 0], [0, 0, 0, 0, 0],
         [0, 0, 0, -8, 4], [0, 0, 0, 4, 1]],
    ],
}

D_STEPS = {
    1: [
        [[-1, -1], [-1, 0]],
        [[-1, 0], [0, 0]],
    ],
    2: [
        [[-4, -4, -2], [-4, -4, -2], [-2, -2, 0]],
        [[-4, 0, 0], [0, -4, -2], [0, -2, 0]],
        [[-4, 0, 0], [0, -4, 0], [0, 0, 0]],
    ],
    3: [
        [[-36, -36, -18, -6], [-36, -36, -18, -6], [-18, -18, -9, -3], [-6, -6, -3, 0]],
        [[-36, 0, 0, 0], [0, -36, -18, -6], [0, -18, -9, -3], [0, -6, -3, 0]],
        [[-36, 0, 0, 0], [0, -36, -6, 0], [0, -6, -9, -3], [0, 0, -3, 0]],
    ],
    4: [
        [[-576, -576, -288, -96, -24], [-576, -576, -288, -96, -24],
         [-288, -288, -144, -48, -12], [-96, -96, -48, -16, -4], [-24, -24, -12, -4, 0]],
        [[-576, 0, 0, 0, 0], [0, -576, -288, -96, -24], [0, -288, -144, -48, -12],
         [0, -96, -48, -16, -4], [0, -24, -12, -4, 0]],
        [[-576, 0, 0, 0, 0], [0, -576, -96, -24, 0], [0, -96, -144, -48, -12],
         [0, -24, -48, -16, -4], [0, 0, -12, -4, 0]],
        [[-576, 0, 0, 0, 0], [0, -576, -96, -24, 0], [0, -96, -144, -24, 0],
         [0, -24, -24, -16, -4], [0, 0, 0, -4, 0]],
    ],
}

# G deposits 2*c_{p,l-1} on rows l..s of column l-1
G_STEPS = {
    1: [
        [[0, 0], [0, 0]],
        [[0, 2], [2, 0]],
    ],
    2: [
        [[0, 0, 0], [0, 0, 0], [0, 0, 0]],
        [[0, 8, 4], [8, 0, 0], [4, 0, 0]],
        [[0, 8, 4], [8, 0, 4], [4, 4, 0]],
    ],
    3: [
        [[0] * 4 for _ in range(4)],
        [[0, 72, 36, 12], [72, 0, 0, 0], [36, 0, 0, 0], [12, 0, 0, 0]],
        [[0, 72, 36, 12], [72, 0, 24, 12], [36, 24, 0, 0], [12, 12, 0, 0]],
    ],
    4: [
        [[0] * 5 for _ in range(5)],
        [[0, 1152, 576, 192, 48], [1152, 0, 0, 0, 0], [576, 0, 0, 0, 0],
         [192, 0, 0, 0, 0], [48, 0, 0, 0, 0]],
        [[0, 1152, 576, 192, 48], [1152, 0, 384, 144, 48], [576, 384, 0, 0, 0],
         [192, 144, 0, 0, 0], [48, 48, 0, 0, 0]],
        [[0, 1152, 576, 192, 48], [1152, 0, 384, 144, 48], [576, 384, 0, 48, 24],
         [192, 144, 48, 0, 0], [48, 48, 24, 0, 0]],
    ],
}

# H per the stability-theorem deposit placement (diagonal-bearing rows)
H_STEPS = {
    1: [
        [[0, 0], [0, 0]],
        [[2, 0], [0, 0]],
    ],
    2: [
        [[0, 0, 0], [0, 0, 0], [0, 0, 0]],
        [[8, 4, 0], [4, 0, 0], [0, 0, 0]],
        [[8, 4, 0], [4, 4, 0], [0, 0, 0]],
    ],
    3: [
        [[0] * 4 for _ in range(4)],
        [[72, 36, 12, 0], [36, 0, 0, 0], [12, 0, 0, 0], [0, 0, 0, 0]],
        [[72, 36, 12, 0], [36, 24, 12, 0], [12, 12, 0, 0], [0, 0, 0, 0]],
    ],
    4: [
        [[0] * 5 for _ in range(5)],
        [[1152, 576, 192, 48, 0], [576, 0, 0, 0, 0], [192, 0, 0, 0, 0],
         [48, 0, 0, 0, 0], [0, 0, 0, 0, 0]],
        [[1152, 576, 192, 48, 0], [576, 384, 144, 48, 0], [192, 144, 0, 0, 0],
         [48, 48, 0, 0, 0], [0, 0, 0, 0, 0]],
        [[1152, 576, 192, 48, 0], [576, 384, 144, 48, 0], [192, 144, 48, 24, 0],
         [48, 48, 24, 0, 0], [0, 0, 0, 0, 0]],
    ],
}

KEY_FACTORS = {
    # s: (c_diag, zeta, rho, gamma_or_None, cfl_exponent_string)
    1: (1, 1, 1, 2, "2"),
    2: (1, 2, 2, 4, "4/3"),
    3: (-3, 2, 2, None, "1"),
    4: (-8, 3, 2, 5, "5/4"),
    5: (40, 3, 3, 6, "6/5"),
    6: (180, 4, 4, 8, "8/7"),
    7: (-1260, 4, 4, None, "1"),
    8: (-8064, 5, 4, 9, "9/8"),
    9: (72576, 5, 5, 10, "10/9"),
    10: (604800, 6, 6, 12, "12/11"),
    11: (-6652800, 6, 6, None, "1"),
    12: (-68428800, 7, 6, 13, "13/12"),
}
