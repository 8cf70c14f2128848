from unittest.mock import patch

import pytest

from app.services.logging import StandardLoggerService


@pytest.fixture
def mock_logger():
    with patch("app.services.logging.LoggerFactory.create_logger") as MockLogger:
        mock_instance = MockLogger.return_value
        yield mock_instance


@pytest.fixture
def logging(mock_logger):
    return StandardLoggerService()


def test_logger_info_called(logging, mock_logger):
    logging.info("Nystrom solve converged", m=8, iterations=6)

    mock_logger.info.assert_called_once_with(
        "Nystrom solve converged", m=8, iterations=6
    )


def test_logger_warning_called(logging, mock_logger):
    logging.warning("Moment recurrence failed validation", y=0.5, index=3)

    mock_logger.warning.assert_called_once_with(
        "Moment recurrence failed validation", y=0.5, index=3
    )


def test_logger_debug_called(logging, mock_logger):
    logging.debug("Newton iteration", residual=1e-3)

    mock_logger.debug.assert_called_once_with("Newton iteration", residual=1e-3)


def test_logger_error_called(logging, mock_logger):
    logging.error("Newton iteration did not converge", iterations=100)

    mock_logger.error.assert_called_once_with(
        "Newton iteration did not converge", iterations=100
    )


def test_logger_exception_called(logging, mock_logger):
    logging.exception("Test exception message", exception="ExampleException")

    mock_logger.exception.assert_called_once_with(
        "Test exception message", exception="ExampleException"
    )


def test_keys_appended_and_removed(logging, mock_logger):
    backend = mock_logger.logger

    with logging.keys(example="ex3", m=16) as scoped:
        assert scoped is logging
        backend.append_keys.assert_called_once_with(example="ex3", m=16)
        backend.remove_keys.assert_not_called()

    backend.remove_keys.assert_called_once_with(["example", "m"])


def test_keys_removed_on_error(logging, mock_logger):
    with pytest.raises(RuntimeError):
        with logging.keys(example="bie1"):
            raise RuntimeError("solver failed")

    mock_logger.logger.remove_keys.assert_called_once_with(["example"])


def test_timed_logs_elapsed_time(logging, mock_logger):
    with patch("app.services.logging.time.perf_counter", side_effect=[1.0, 3.5]):
        with logging.timed("Solve finished", m=32):
            pass

    mock_logger.info.assert_called_once_with("Solve finished", elapsed=2.5, m=32)


def test_timed_skips_failed_blocks(logging, mock_logger):
    with pytest.raises(RuntimeError):
        with logging.timed("Solve finished"):
            raise RuntimeError("singular")

    mock_logger.info.assert_not_called()
