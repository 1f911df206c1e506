"""Exception types raised by slice_approx."""


class SliceApproxError(Exception):
    """Base class for all library errors."""


class DomainError(SliceApproxError, ValueError):
    """A value lies outside the set where an operation is defined."""


class BranchError(DomainError):
    """A multivalued boundary map was evaluated at (or too near) a branch point."""


class ConfigError(SliceApproxError, ValueError):
    """A domain, sampler or experiment is misconfigured."""


class CertificationError(SliceApproxError):
    """A bound was requested from a modulus that cannot certify it."""
