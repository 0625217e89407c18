"""Closed-form complex multiplications per iteration of the reduced-rank filters."""

from typing import Callable, Dict

from shared_components.exceptions import UnknownAlgorithmError


def _mvdr_mjio_sg(m: int, d: int) -> int:
    return 4 * m * d + 4 * d ** 2 + 3 * d + m + 6


def _mvdr_mjio_rls(m: int, d: int) -> int:
    return 4 * m ** 2 + 3 * d ** 2 + 3 * d + 2


def _rcb_mjio_sg(m: int, d: int) -> int:
    steering = m * d + d ** 2 + 4 * m + d
    multiplier = d ** 3 + m * d + d
    columns = 5 * m + d + 2
    return steering + multiplier + columns


def _rcb_mjio_rls(m: int, d: int) -> int:
    return 2 * d ** 3 + 7 * d ** 2 + 4 * d + 3 + m * d


COMPLEXITY_FORMULAS: Dict[str, Callable[[int, int], int]] = {
    'mvdr-mjio-sg': _mvdr_mjio_sg,
    'mvdr-mjio-rls': _mvdr_mjio_rls,
    'rcb-mjio-sg': _rcb_mjio_sg,
    'rcb-mjio-rls': _rcb_mjio_rls,
}


def complexity_model(algorithm: str, m: int, d: int) -> int:
    """Complex multiplications per snapshot for ``algorithm`` with M sensors and rank D"""

    if algorithm not in COMPLEXITY_FORMULAS:
        raise UnknownAlgorithmError(
            f"no complexity formula for '{algorithm}'; available: {', '.join(COMPLEXITY_FORMULAS)}"
        )
    if not m >= d >= 1:
        raise ValueError(f"require M >= D >= 1, got M={m}, D={d}")
    return COMPLEXITY_FORMULAS[algorithm](int(m), int(d))
