"""boxcert: exact-rational certificates for black-box probability boxes."""

from .model import (
    BoxError,
    BoxFormatError,
    Event,
    EventError,
    ProbabilityBox,
    Scenario,
    ScenarioError,
    event_probability,
    full_context_events,
    mix_boxes,
    parse_box,
    serialize_box,
    uniform_box,
)

__all__ = [
    "BoxError",
    "BoxFormatError",
    "Event",
    "EventError",
    "ProbabilityBox",
    "Scenario",
    "ScenarioError",
    "event_probability",
    "full_context_events",
    "mix_boxes",
    "parse_box",
    "serialize_box",
    "uniform_box",
]

__version__ = "0.1.0"
