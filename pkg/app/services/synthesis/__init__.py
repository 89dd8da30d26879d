"""
Rotation angles and preparation circuits
"""
