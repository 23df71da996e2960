"""Shared exception hierarchy."""


class ModelVoteError(Exception):
    """Base class for package errors."""


class InputError(ModelVoteError, ValueError):
    """Invalid caller-supplied data (files, configs, ballots, labels)."""
