from .command_request import CommandRequest

__all__ = ["CommandRequest"]
