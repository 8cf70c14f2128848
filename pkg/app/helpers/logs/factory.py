from app.helpers.environment import env
from app.helpers.logs.logger.console import ConsoleLogger
from app.helpers.logs.logger.file import FileLogger

CHANNELS = {"console": ConsoleLogger, "file": FileLogger}


class LoggerFactory:
    """
    Picks the log channel from LOG_CHANNEL.

    The file channel is ignored under APP_ENVIRONMENT=testing so test runs
    never write log files; unknown channels fall back to the console.
    """

    @staticmethod
    def create_logger():
        settings = env()
        channel = settings.LOG_CHANNEL
        if settings.APP_ENVIRONMENT == "testing":
            channel = "console"
        return CHANNELS.get(channel, ConsoleLogger)()
