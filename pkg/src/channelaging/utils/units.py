def db_to_linear(value_db: float) -> float:
    return 10.0 ** (value_db / 10.0)
