class InvalidSmoothingExponentError(Exception):
    """
    Exception raised when a smoothing map is requested with q < 1 or with an
    end-point width outside (0, 1).
    """


class GeometryError(Exception):
    """
    Exception raised for degenerate boundary geometry: vanishing tangent away
    from the end points, clockwise orientation, an open parameterization or a
    self-intersection met while evaluating the kernels.
    """


class DomainError(Exception):
    """
    Exception raised when the potential is requested at a point that is on or
    outside the boundary curve.
    """


class CurveFileError(Exception):
    """
    Exception raised for curve sample files that are unreadable, too short or
    not sampled on a uniform parameter grid.
    """


class SamplingError(Exception):
    """
    Exception raised when interior rejection sampling exhausts its budget of
    draws without collecting the requested number of points.
    """
