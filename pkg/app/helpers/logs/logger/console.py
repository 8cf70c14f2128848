import sys
from logging import StreamHandler

from aws_lambda_powertools.logging import Logger

from app.helpers.logs.base import BaseLogger
from app.helpers.logs.formatter.standard import StandardLogFormatter
from config.logging import handler


class ConsoleLogger(BaseLogger):
    def _build(self):
        config = handler("console")
        # stdout carries the emitted tables
        return Logger(
            service=config.name,
            level=config.level,
            formatter=StandardLogFormatter(),
            logger_handler=StreamHandler(sys.stderr),
        )
