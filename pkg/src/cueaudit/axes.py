"""Social axes, descriptors, and semantic configurations.

A semantic configuration is a triple of optional descriptors, one slot per
social axis (status, career, persona). Conditions are identified by a stable
hash of the populated slots, so the same configuration always maps to the
same condition id regardless of how it was assembled.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .errors import AxisMismatch, MalformedConfig


class Axis(str, Enum):
    """The three social axes a descriptor can belong to."""

    STATUS = "status"
    CAREER = "career"
    PERSONA = "persona"


#: Canonical axis order used for slot iteration and condition hashing.
AXES = (Axis.STATUS, Axis.CAREER, Axis.PERSONA)


@dataclass(frozen=True)
class Descriptor:
    """One lexical descriptor on a single axis.

    ``subgroup`` carries the Big Five trait name for persona words and the
    High/Low level for status words; career words leave it empty.
    """

    id: str
    axis: Axis
    surface: str
    subgroup: Optional[str] = None

    def __post_init__(self):
        if not self.surface.strip():
            raise MalformedConfig(f"descriptor {self.id!r} has an empty surface form")


@dataclass(frozen=True)
class SemanticConfig:
    """A triple of optional descriptors; at least one slot must be populated."""

    status: Optional[Descriptor] = None
    career: Optional[Descriptor] = None
    persona: Optional[Descriptor] = None

    def __post_init__(self):
        for axis in AXES:
            d = getattr(self, axis.value)
            if d is not None and d.axis is not axis:
                raise AxisMismatch(
                    f"descriptor {d.id!r} belongs to axis {d.axis.value!r}, "
                    f"not {axis.value!r}"
                )
        if self.arity == 0:
            raise MalformedConfig("semantic configuration has no populated slot")

    def slot(self, axis: Axis) -> Optional[Descriptor]:
        return getattr(self, axis.value)

    @property
    def descriptors(self) -> tuple[Descriptor, ...]:
        """Populated descriptors in canonical axis order."""
        return tuple(d for d in (self.status, self.career, self.persona) if d is not None)

    @property
    def arity(self) -> int:
        return sum(1 for a in AXES if getattr(self, a.value) is not None)

    @property
    def condition_id(self) -> str:
        """Stable id derived from the populated (axis, descriptor id) pairs.

        Independent of templates, transcripts, and of the order in which
        slots were filled; two configs collide only if they are equal.
        """
        key = "|".join(f"{d.axis.value}:{d.id}" for d in self.descriptors)
        return hashlib.sha256(key.encode("utf-8")).hexdigest()[:16]

    def label(self) -> str:
        """Human-readable slot summary, e.g. ``status=high/career=nurse``."""
        return "/".join(f"{d.axis.value}={d.surface}" for d in self.descriptors)


def univariate(descriptor: Descriptor) -> SemanticConfig:
    """Configuration with ``descriptor`` alone and the other slots empty."""
    return SemanticConfig(**{descriptor.axis.value: descriptor})


def compose(*descriptors: Descriptor) -> SemanticConfig:
    """Configuration from one descriptor per distinct axis."""
    slots: dict[str, Descriptor] = {}
    for d in descriptors:
        if d.axis.value in slots:
            raise AxisMismatch(f"two descriptors on axis {d.axis.value!r}")
        slots[d.axis.value] = d
    return SemanticConfig(**slots)
