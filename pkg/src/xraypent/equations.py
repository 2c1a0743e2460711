"""Transcribed equation texts for the two-pentagon system.

Terms appear in the order they are printed in the source, with implicit
products written out using ``*``.  Nothing here is simplified or corrected.
"""

# direction label -> (equation, [nonvanishing side conditions])
PENTAGON_EQUATIONS = {
    "B1B5": (
        "w - w*v - x*y - u*y - w*y",
        ["1 - v"],
    ),
    "C1C5": (
        "u + w - x",
        ["1 - v", "1 - v - y - z"],
    ),
    "D1D5": (
        "v - 2*u*v - x*v + 2*u - 2*y*u - 2*z*u - w*v + 1 + y + z + x - x*y - x*z"
        " + w - y*w - z*w",
        ["1 - y - z"],
    ),
    "E2A2": (
        "1 - 2*u - v + 2*u*v - 2*x*y - z + z*w + 2*z*u + u^2 - u^2*v + 2*x*y*u"
        " - z*w*u - z*u^2 - w + w*u + w*v - u*v*w + x*y*w",
        ["1 - u", "1 - w - u"],
    ),
    "E3A3": (
        "-y + 2*y*u - y*u^2 + x*y - x*y*u - x*y*w + w - u*w - z*w + z*w*u",
        ["1 - u", "1 - x - u"],
    ),
    "E4A4": (
        "z*w - y*u - v*w",
        ["u + w"],
    ),
}

# After eliminating z and w; each entry is a list of (v-power, coefficient block).
STAGE1_BLOCKS = {
    "Q1": [
        (1, "y - 3*y*u + y*u^2 - 3*x*y + 3*x*y*u + u"),
        (0, "-y + 2*y*u + 3*x*y - 3*x*y*u - 2*x^2*y^2 - u"),
    ],
    "Q2": [
        (2, "-4*x + 7*x*u + 4*x^2 - 2*u^2 + u"),
        (1, "-10*x*u - 2*x^2 + 4*u^2 - 2*u - 2*x*y + 6*x*y*u - 6*x^2*y"),
        (0, "3*x*u - 2*u^2 + 2*x^2*y + 2*x + 2*x*y + u + 2*x^2 - 6*x*y*u - 4*x^2*y^2"),
    ],
    "Q3": [
        (2, "4*x - 8*x*u - u + 2*u^2 + 4*x*u^2 - u^3"),
        (1, "-6*x + 12*x*u + 2*u - 4*u^2 - 6*x*u^2 + 2*u^3"
            " + 12*x^2*y - 12*x^2*y*u - 2*x*y*u + 2*x*y*u^2"),
        (0, "2*x - 4*x*u - 8*x^2*y - u + 2*u^2 + 2*x*u^2 + 8*x^2*y*u - u^3"
            " + 2*x*y*u - 2*x*y*u^2 + 4*x^3*y^2"),
    ],
}

# After eliminating v; each entry is a list of (u-power, coefficient block).
STAGE2_BLOCKS = {
    "R1": [
        (6, "-2*y^2"),
        (5, "5*y^2 - 11*x*y^2 - 6*x*y^3"),
        (4, "-4*y^2 - 4*x*y - 10*x^2*y^2 - 8*x^2*y^3 - 2*x*y^2 + 26*x*y^3 - 4*x^2*y^4"),
        (3, "y^2 + 26*x^2*y^2 + 8*x*y - 13*x*y^2 - 32*x*y^3 + 6*x^3*y^2 + 2*x^2*y"
            " - 26*x^3*y^3 + 22*x^2*y^3 - 12*x^3*y^4 + 24*x^2*y^4"),
        (2, "-16*x^4*y^3 + 8*x*y^2 + 14*x*y^3 + 24*x^3*y + 36*x^4*y^2 + 4*x^2"
            " - 34*x^2*y + 4*x*y - 2*x - 94*x^3*y^2 + 52*x^3*y^3"
            " + 26*x^2*y^2 - 22*x^2*y^3 + 56*x^3*y^4 - 20*x^4*y^4 - 44*x^2*y^4"),
        (1, "36*x^5*y^3 - 8*x^5*y^4 - 32*x^4*y^3 - 2*x*y^3 - 60*x^4*y^2 - 24*x^3*y"
            " + 122*x^3*y^2 + 20*x^2*y - 4*x*y + 4*x*y^2 - 18*x^3*y^3"
            " - 50*x^2*y^2 + 16*x^2*y^3 + 64*x^4*y^4 - 72*x^3*y^4 + 24*x^2*y^4"),
        (0, "16*x^6*y^4 - 36*x^5*y^3 + 60*x^4*y^3 + 20*x^5*y^4 + 36*x^4*y^2"
            " + 16*x^2*y^2 - 42*x^3*y^2 - 2*x*y^2 + 8*x^3*y^3 - 36*x^4*y^3"
            " - 4*x^2*y^3 + 20*x^3*y^4 - 36*x^4*y^4 - 4*x^2*y^4"),
    ],
    "R2": [
        (7, "-y"),
        (6, "4*y + 2*x*y - 2*x*y^2"),
        (5, "-6*y - 6*x^2*y - 2*x - 6*x*y + 10*x*y^2 + 6*x^2*y^2"),
        (4, "4*y + 6*x + 2*x*y - 16*x*y^2 + 28*x^2*y - 26*x^2*y^2 + 8*x^3*y^3"),
        (3, "-y - 28*x^2*y - 6*x + 8*x*y + 10*x*y^2 + 22*x^2*y^2 - 24*x^4*y^2"
            " - 4*x^2 - 20*x^3*y + 8*x^4*y^3 + 52*x^3*y^2 - 40*x^3*y^3"),
        (2, "4*x^2*y + 2*x - 8*x*y - 20*x^5*y^3 - 2*x*y^2 + 44*x^3*y - 128*x^3*y^2"
            " + 72*x^4*y^2 + 4*x^2 + 10*x^2*y^2 - 16*x^4*y^3 + 60*x^3*y^3"),
        (1, "2*x*y + 40*x^5*y^3 - 72*x^4*y^2 - 20*x^3*y - 16*x^2*y^2 + 88*x^3*y^2"
            " - 28*x^3*y^3 + 8*x^4*y^3 + 2*x^2*y"),
        (0, "4*x^3*y^3 + 4*x^2*y^2 + 24*x^4*y^2 - 20*x^3*y^2 - 20*x^5*y^3"),
    ],
}
