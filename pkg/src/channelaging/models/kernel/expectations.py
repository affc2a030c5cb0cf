def inv_norm_expectation(M: int, sigma2: float) -> float:
    """E{1/||g||^2} for g ~ CN(0, sigma2 I_M)."""
    if M <= 1:
        raise ValueError(f"E{{1/||g||^2}} diverges for M <= 1, got M={M}")
    if not sigma2 > 0:
        raise ValueError(f"sigma2 must be > 0, got {sigma2}")
    return 1.0 / ((M - 1) * sigma2)


def wishart_inv_diag_expectation(M: int, K: int, sigma2: float) -> float:
    """E{[(G^H G)^-1]_kk} for an M x K matrix G of i.i.d. CN(0, sigma2) entries."""
    if K < 1:
        raise ValueError(f"K must be >= 1, got K={K}")
    if M <= K:
        raise ValueError(f"inverse Wishart mean needs M > K, got M={M}, K={K}")
    if not sigma2 > 0:
        raise ValueError(f"sigma2 must be > 0, got {sigma2}")
    return 1.0 / ((M - K) * sigma2)
