"""
Qudit statevectors and gates
"""
