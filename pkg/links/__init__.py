"""Link families J(·) for the control-function estimators."""

from errors import LinkError

from .base import LinkFamily, TruncatedMoment
from .custom import CustomLink
from .linear import LinearLink
from .logit import LogitLink
from .probit import ProbitLink

LINK_FAMILIES: dict[str, type[LinkFamily]] = {
    "probit": ProbitLink,
    "linear": LinearLink,
    "logit": LogitLink,
}

_INSTANCES: dict[str, LinkFamily] = {}


def get_link(name: str) -> LinkFamily:
    """Get the shared instance of a built-in link family by name."""
    name = name.strip().lower()
    if name not in LINK_FAMILIES:
        raise LinkError(f"Unknown link: {name}. Available: {list(LINK_FAMILIES.keys())}")
    if name not in _INSTANCES:
        _INSTANCES[name] = LINK_FAMILIES[name]()
    return _INSTANCES[name]


__all__ = [
    "LINK_FAMILIES",
    "CustomLink",
    "LinearLink",
    "LinkFamily",
    "LogitLink",
    "ProbitLink",
    "TruncatedMoment",
    "get_link",
]
