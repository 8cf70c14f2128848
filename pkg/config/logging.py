import json
from typing import Callable, Dict, Optional

from pydantic import BaseModel, ConfigDict, Field

from app.helpers.environment import env


class BaseHandlerConfig(BaseModel):
    """Service name, level and formatter shared by the log channels."""

    model_config = ConfigDict(from_attributes=True)
    class_: str
    formatter: str
    name: str
    level: str


class ConsoleHandlerConfig(BaseHandlerConfig):
    """Console channel; records go to stderr so stdout keeps only the tables."""


class FileHandlerConfig(BaseHandlerConfig):
    path: str
    json_deserializer: Optional[Callable] = Field(default=json.loads, exclude=True)


class Handlers:
    """
    Process-wide registry of the log channel configurations.

    Built once from the settings on first access; call `reset()` after
    changing LOG_LEVEL, LOG_FILE or APP_NAME at runtime.
    """

    _instance = None
    handlers: Dict[str, BaseHandlerConfig]

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
            cls._instance._initialize_handlers()
        return cls._instance

    @classmethod
    def reset(cls):
        cls._instance = None

    def _initialize_handlers(self):
        settings = env()
        common = dict(
            name=settings.APP_NAME, level=settings.LOG_LEVEL, formatter="json"
        )
        self.handlers = {
            "console": ConsoleHandlerConfig(class_="logging.StreamHandler", **common),
            "file": FileHandlerConfig(
                class_="logging.FileHandler", path=settings.LOG_FILE, **common
            ),
        }

    def get_handler(self, handler_type):
        return self.handlers.get(handler_type)


def handler(handler_type):
    """Configuration of the "console" or "file" channel, None for any other."""
    return Handlers().get_handler(handler_type)
