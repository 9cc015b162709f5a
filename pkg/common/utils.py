import csv
import hashlib
import logging
from pathlib import Path

from django.conf import settings

logger = logging.getLogger(__name__)


def config_digest(text):
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


def csv_preamble(config_text):
    return (
        f"# schema={settings.CSV_SCHEMA_VERSION} "
        f"artifact={settings.ARTIFACT_VERSION} "
        f"config={config_digest(config_text)}"
    )


def write_csv(stream, serializer_class, instances, config_text):
    """Write one row per instance with the versioned header comment.

    ``stream`` is an open text file or a path.
    """
    if isinstance(stream, (str, Path)):
        with open(stream, "w", newline="", encoding="utf-8") as fh:
            return write_csv(fh, serializer_class, instances, config_text)

    stream.write(csv_preamble(config_text) + "\n")
    writer = csv.DictWriter(
        stream, fieldnames=serializer_class.header(), lineterminator="\n"
    )
    writer.writeheader()
    count = 0
    for instance in instances:
        writer.writerow(serializer_class(instance).data)
        count += 1
    logger.debug("wrote %d %s rows", count, serializer_class.__name__)
    return count
