from app.services.logging import StandardLoggerService


def _command(context):
    return {
        "name": getattr(context, "command", None),
        "version": getattr(context, "version", None),
        "pid": getattr(context, "pid", None),
    }


def standard_logging_middleware(handler, logger=None):
    """
    Wrap a command handler `handler(event, context)` with structured logs.

    The parsed arguments are logged on entry. On return the exit code, the
    size of the rendered output and the report metadata are logged, not the
    table itself. Errors are logged with their type and re-raised.
    """
    logger = logger or StandardLoggerService()

    def wrapped_handler(event, context):
        command = _command(context)
        logger.info("Command received", arguments=event, command=command)
        try:
            response = handler(event, context)
        except Exception as e:
            logger.error(
                "Command failed", command=command, error=str(e), type=type(e).__name__
            )
            raise

        output = response.get("output", "")
        logger.info(
            "Command completed",
            command=command,
            exit_code=response.get("exit_code"),
            output_size=len(output.encode("utf-8")),
            metadata=response.get("metadata"),
        )
        return response

    return wrapped_handler
