"""
Logging estructurado (JSON) para posreal.

Los módulos de la librería solo hacen ``logging.getLogger(__name__)``; nunca instalan
handlers al importarse. La CLI (o un script) llama a ``configure_logging`` una vez.

Para adjuntar campos extra a un registro::

    logger.info("certificado encontrado", extra={"extra_data": {"N": 5}})
"""
import json
import logging
import sys
from datetime import datetime, timezone
from typing import Optional, TextIO

ROOT_LOGGER = "posreal"


class JSONFormatter(logging.Formatter):
    """Formatea cada registro como una línea JSON."""

    def format(self, record: logging.LogRecord) -> str:
        log_data = {
            "timestamp": datetime.now(timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "module": record.module,
            "function": record.funcName,
            "line": record.lineno,
        }

        # Agregar campos adicionales si existen
        if hasattr(record, "extra_data"):
            log_data.update(record.extra_data)

        if record.exc_info:
            log_data["exception"] = self.formatException(record.exc_info)

        return json.dumps(log_data, default=str)


def configure_logging(level: str = "WARNING", stream: Optional[TextIO] = None) -> logging.Logger:
    """
    Instala un único handler JSON en el logger ``posreal``.

    Es idempotente: llamadas repetidas solo cambian el nivel y el destino.

    Args:
        level: Nivel de logging ("DEBUG", "INFO", "WARNING", "ERROR")
        stream: Destino del handler (stderr por defecto)

    Returns:
        El logger raíz del paquete.
    """
    logger = logging.getLogger(ROOT_LOGGER)
    logger.setLevel(level)

    target = stream or sys.stderr
    handler = next((h for h in logger.handlers if getattr(h, "_posreal_json", False)), None)
    if handler is None:
        handler = logging.StreamHandler(target)
        handler.setFormatter(JSONFormatter())
        handler._posreal_json = True
        logger.addHandler(handler)
    elif handler.stream is not target:
        handler.setStream(target)
    handler.setLevel(level)

    # Los registros no se duplican en el logger raíz de Python
    logger.propagate = False
    return logger
