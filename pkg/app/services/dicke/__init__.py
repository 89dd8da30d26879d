"""
Spin-s Dicke states: combinatorics, analytic constructors and spin operators
"""
