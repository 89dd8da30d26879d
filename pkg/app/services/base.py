"""
Base service class
"""
from abc import ABC
from typing import Any


class BaseService(ABC):
    """Base service class for business logic"""

    def __init__(self):
        pass

    def validate(self, request: Any) -> Any:
        """Validate service input and return the domain object it describes"""
        return request

    def process(self, request: Any) -> Any:
        """Process service logic"""
        raise NotImplementedError("Subclasses must implement process method")
