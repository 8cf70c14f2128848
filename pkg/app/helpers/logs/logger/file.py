import os
from logging import FileHandler

from aws_lambda_powertools.logging import Logger

from app.helpers.logs.base import BaseLogger
from app.helpers.logs.formatter.standard import StandardLogFormatter
from config.logging import handler


class FileLogger(BaseLogger):
    def _build(self):
        config = handler("file")
        directory = os.path.dirname(config.path)
        if directory:
            os.makedirs(directory, exist_ok=True)
        return Logger(
            service=config.name,
            level=config.level,
            formatter=StandardLogFormatter(),
            logger_handler=FileHandler(config.path),
            json_deserializer=config.json_deserializer,
        )
