from typing import Dict

_LABELS = {
    "alpha": "α",
    "kappa1": "κ*₁",
    "kappa2": "κ*₂",
    "M0": "M₀",
}


def format_value(value: float) -> str:
    """Shortest readable form of a parameter value, e.g. 0.9999 or 1e+06."""
    return f"{value:g}"


def curve_name(figure: str, **params: float) -> str:
    """File-name stem of one curve, e.g. fig1_alpha-0.9999_kappa1-0.01."""
    parts = [figure]
    parts += [f"{key}-{format_value(value)}" for key, value in params.items()]
    return "_".join(parts)


def format_curve_label(params: Dict[str, float]) -> str:
    """Format curve parameters nicely, e.g. "α = 1, κ*₁ = 0.01"."""
    return ", ".join(
        f"{_LABELS.get(key, key)} = {format_value(value)}"
        for key, value in params.items()
    )
