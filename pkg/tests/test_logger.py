"""
Tests pour le module logger.
"""

import io
import logging
import tempfile
from pathlib import Path
from unittest.mock import patch

from core.logger import PinvLogger, get_logger, log_debug, log_error, log_info, log_warning, setup_logging


class TestLogger:
    """Tests pour le système de logging."""

    def test_get_logger_default(self):
        """Test de récupération du logger par défaut."""
        logger = get_logger()

        assert isinstance(logger, PinvLogger)
        assert logger.logger.name == "pinvtool"
        # Le niveau peut varier selon l'ordre des tests
        assert logger.logger.level in [logging.DEBUG, logging.INFO, logging.WARNING, logging.ERROR]

    def test_get_logger_singleton(self):
        """Test que get_logger retourne toujours la même instance."""
        assert get_logger() is get_logger()

    def test_logger_initialization_with_files(self):
        """Test de l'initialisation avec fichiers debug et erreur."""
        with tempfile.TemporaryDirectory() as temp_dir:
            logger = PinvLogger(
                name="test_files",
                level="DEBUG",
                debug_log_file=Path(temp_dir) / "debug.log",
                error_log_file=Path(temp_dir) / "error.log",
            )

            assert logger.logger.level == logging.DEBUG
            assert len(logger.logger.handlers) == 3
            logger.reset_handlers()

    def test_logger_levels(self):
        """Test des différents niveaux de log."""
        logger = PinvLogger(name="test_levels", level="DEBUG")

        for method in ("debug", "info", "warning", "error"):
            with patch.object(logger.logger, method) as mocked:
                getattr(logger, method)(f"Test {method}")
                mocked.assert_called_once_with(f"Test {method}")

    def test_setup_logging_writes_debug_file(self):
        """setup_logging remplace l'instance globale et écrit le fichier debug."""
        with tempfile.TemporaryDirectory() as temp_dir:
            debug_file = Path(temp_dir) / "logs" / "debug.log"
            logger = setup_logging(level="DEBUG", debug_log_file=debug_file)

            assert get_logger() is logger
            log_debug("pass 1: CZero_DtD")
            for handler in logger.logger.handlers:
                handler.flush()
            assert "CZero_DtD" in debug_file.read_text()

            logger.reset_handlers()
            setup_logging(level="INFO")

    def test_setup_logging_does_not_duplicate_handlers(self):
        """Deux reconfigurations successives gardent un seul handler console."""
        setup_logging(level="INFO")
        logger = setup_logging(level="WARNING")

        assert len(logger.logger.handlers) == 1
        assert logger.logger.level == logging.WARNING
        setup_logging(level="INFO")

    def test_handlers_not_duplicated(self):
        """Test que les handlers ne sont pas dupliqués."""
        logger1 = PinvLogger(name="duplicate_test")
        logger2 = PinvLogger(name="duplicate_test")

        assert len(logger1.logger.handlers) == len(logger2.logger.handlers)

    def test_quick_helpers(self):
        """Les fonctions rapides passent par l'instance globale."""
        logger = get_logger()
        with (
            patch.object(logger, "info") as mock_info,
            patch.object(logger, "warning") as mock_warning,
            patch.object(logger, "error") as mock_error,
            patch.object(logger, "debug") as mock_debug,
        ):
            log_info("i")
            log_warning("w")
            log_error("e")
            log_debug("d")

        mock_info.assert_called_once_with("i")
        mock_warning.assert_called_once_with("w")
        mock_error.assert_called_once_with("e")
        mock_debug.assert_called_once_with("d")

    def test_console_stream_skips_debug(self):
        """La console reçoit INFO+ mais jamais DEBUG."""
        stream = io.StringIO()
        logger = PinvLogger(name="test_stream", level="DEBUG", stream=stream)

        logger.debug("k=2 delta=1")
        logger.info("Verified 3 instance(s)")

        assert "Verified 3 instance(s)" in stream.getvalue()
        assert "delta" not in stream.getvalue()
        logger.reset_handlers()
