"""Exact counting of Eulerian tours and A-trails, hardness gadgets, and gadget signatures."""

from .counting import GadgetNetwork, VRTable, compose_vr, count_closed, count_vr
from .graph import ATRAIL, GENERAL, MapBuilder, MapError, MixedMap, trace, transition_systems
from .signature import Signature, glue_signature, signature_of

__version__ = "0.1.0"

__all__ = ["ATRAIL", "GENERAL", "GadgetNetwork", "MapBuilder", "MapError", "MixedMap", "Signature",
           "VRTable", "compose_vr", "count_closed", "count_vr", "glue_signature", "signature_of",
           "trace", "transition_systems"]
