"""
Spin-s Dicke Toolkit
"""

__version__ = "1.0.0"
