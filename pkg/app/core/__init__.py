"""
Core application components
"""

