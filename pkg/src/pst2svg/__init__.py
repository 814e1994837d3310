"""Parse a PSTricks figure subset and render each pspicture as SVG."""

from .curves import BezierChain, closed_spline, sample_chain
from .model import (
    AbsPoint,
    Cartesian,
    Dimension,
    DocumentTree,
    NodeRef,
    Offset,
    OptionList,
    Picture,
    PNode,
    Polar,
    PsCCurve,
    PsLine,
    PsSet,
    format_command,
    format_point,
)
from .parser import ParseError, parse_command, parse_dimension, parse_document, parse_point
from .resolver import (
    NodeEnv,
    ResolveError,
    ResolvedElement,
    ResolvedPicture,
    convert_dimension,
    resolve_document,
    resolve_picture,
    resolve_point,
)
from .svg import SvgConfig, emit_resolved_json, emit_svg, expand_curves

__version__ = "0.1.0"
