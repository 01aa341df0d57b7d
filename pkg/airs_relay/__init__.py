"""Placement and passive beam design for an aerial intelligent reflecting surface relay."""

from .exceptions import InvalidInputError

__version__ = '0.1.0'

__all__ = ['InvalidInputError', '__version__']
