"""Homoclinic invariant fixtures.

The relevance A and the Lazutkin invariant L of the primary homoclinic orbits
are not computed by qsmap; they are read from here (or from a JSON file with
the same schema passed as ``--seed-fixtures``). S and ΔS are listed for
comparison with the computed values.

Schema per entry:
    k          perturbation strength the values belong to
    S_mean     (S1 + S2)/2
    delta_S    S2 - S1
    A_mean     (A1 + A2)/2
    delta_A    A2 - A1 (informational; the proxy uses equal relevances)
    L          [L1, L2] or None when unknown
    mu         Maslov indices of the two orbits
    notes      free text
"""

CONFIGURATION = {
    "k0.5": {
        "k": 0.5,
        "S_mean": 0.142258,
        "delta_S": 1.2e-5,
        "A_mean": 0.53998,
        "delta_A": 5.8e-4,
        "L": None,
        "mu": [0, 1],
        "notes": "relative difference of the orbit amplitudes is 3.9e-5",
    },
    # Intensities annotated 1 and 2 at this k are the quantization solutions
    # n = 37 and n = 38 (N = 158), on the states labelled 0 and -1.
    # No invariants are known here.
    "k1.447": {
        "k": 1.447,
        "S_mean": None,
        "delta_S": None,
        "A_mean": None,
        "delta_A": None,
        "L": None,
        "mu": [0, 1],
        "reference_labels": {"N": 158, "1": 37, "2": 38},
        "notes": "reference case for label assignment; A falls back to k=0.5",
    },
}
