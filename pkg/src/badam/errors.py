"""Exception hierarchy shared by the toolkit modules."""


class BadamError(Exception):
    """Base class for all toolkit errors."""


class ParameterError(BadamError, ValueError):
    """An operation was called with an out-of-contract parameter."""


class ComponentTooSmallError(BadamError, ValueError):
    """A skeleton component has fewer than two pixels and cannot be pathed."""


class InfeasibleSpecError(BadamError, ValueError):
    """A synthetic page spec requests more lines than the page can hold."""


class PageXMLError(BadamError, ValueError):
    """Base class for PAGE XML reader errors. Carries a source location."""

    def __init__(self, message, *, source="<bytes>", line_index=None):
        self.source = source
        self.line_index = line_index
        where = source if line_index is None else f"{source}, line element {line_index}"
        super().__init__(f"{where}: {message}")


class MalformedPageXMLError(PageXMLError):
    """The document is not well-formed XML or lacks the expected structure."""


class MissingPointsError(PageXMLError):
    """A Baseline element has no usable points attribute."""


class OutOfBoundsError(PageXMLError):
    """A baseline coordinate lies outside the page rectangle."""


class PageSetMismatchError(BadamError, ValueError):
    """Predicted and ground-truth page id sets differ."""

    def __init__(self, missing_pred, missing_truth):
        self.missing_pred = sorted(missing_pred)
        self.missing_truth = sorted(missing_truth)
        parts = []
        if self.missing_pred:
            parts.append(f"missing from predictions: {', '.join(self.missing_pred)}")
        if self.missing_truth:
            parts.append(f"missing from ground truth: {', '.join(self.missing_truth)}")
        super().__init__("page id sets differ; " + "; ".join(parts))
