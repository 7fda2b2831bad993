"""Bidihedral Verify - permutation groups and arc-transitive bi-dihedrant graphs."""

__version__ = "0.1.0"
__author__ = "ArcheWizard"
__license__ = "MIT"

# Package metadata
__all__ = ["__version__", "__author__", "__license__"]
