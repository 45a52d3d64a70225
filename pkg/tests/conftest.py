ACCEPTANCE_SEED = 20260810
