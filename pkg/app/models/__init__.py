"""
Data models
"""

