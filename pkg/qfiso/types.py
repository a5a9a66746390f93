"""Enumerations shared across qfiso"""
from enum import Enum


class Form(Enum):
    """Which sesquilinear form a Gram matrix is built from"""
    COMPLEX = 1
    REAL_PART = 2

    def __str__(self):
        """Convert to readable string"""
        return str(self.name).lower().replace('_', '-')


class NotStandardReason(Enum):
    """Why a set of generators does not span a standard subspace"""
    TOO_FEW_GENERATORS = 1
    TOO_MANY_GENERATORS = 2
    COMPLEX_DEGENERATE = 3

    def __str__(self):
        """Convert to readable string (CamelCase, as printed by the CLI)"""
        return ''.join(part.capitalize() for part in self.name.split('_'))


class Sector(Enum):
    """Field sector of a Klein-Gordon test function"""
    PHI = 1
    PI = 2

    def __str__(self):
        """Convert to readable string"""
        return str(self.name).lower()
