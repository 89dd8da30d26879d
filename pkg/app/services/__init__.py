"""
Business logic services
"""

