import os
from pathlib import Path

from dotenv import load_dotenv

load_dotenv()

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent

# No web surface is served; the key only satisfies Django's setup checks.
SECRET_KEY = os.getenv("SECRET_KEY", "actuation-local-only")

DEBUG = os.getenv("DEBUG", "false").lower() == "true"

ALLOWED_HOSTS = []

# Application definition

DJANGO_APPS = [
    "django.contrib.contenttypes",
    "django.contrib.auth",
]

LOCAL_APPS = [
    "common",
    "system",
    "queueing",
    "metrics",
    "simulation",
    "pareto",
    "experiments",
]

THIRD_PARTY_APPS = [
    "rest_framework",
]

INSTALLED_APPS = DJANGO_APPS + LOCAL_APPS + THIRD_PARTY_APPS

# Everything is computed in memory; there is nothing to persist.
DATABASES = {}

DEFAULT_AUTO_FIELD = "django.db.models.BigAutoField"

LANGUAGE_CODE = "en-us"

TIME_ZONE = "UTC"

USE_I18N = False

USE_TZ = True

# Solver settings

ARTIFACT_VERSION = "1.0.0"
CSV_SCHEMA_VERSION = "1"

# Geo/D/C/C enumeration stops past this many states
DET_STATE_SPACE_CAP = 5_000_000

STEADY_STATE_TOL = 1e-10
POWER_ITERATION_TOL = 1e-12
POWER_ITERATION_MAX_ITER = 1_000_000

SIM_BATCHES = 20
SIM_WARMUP_SLOTS = 10_000

# Logging

LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO")

LOGGING = {
    "version": 1,
    "disable_existing_loggers": False,
    "formatters": {
        "simple": {
            "format": "{asctime} {levelname} {name}: {message}",
            "style": "{",
        },
    },
    "handlers": {
        "console": {
            "class": "logging.StreamHandler",
            "formatter": "simple",
        },
    },
    "root": {
        "handlers": ["console"],
        "level": "WARNING",
    },
    "loggers": {
        app: {"handlers": ["console"], "level": LOG_LEVEL, "propagate": False}
        for app in LOCAL_APPS
    },
}

SENTRY_DSN = os.getenv("SENTRY_DSN")

if SENTRY_DSN:
    import sentry_sdk

    sentry_sdk.init(
        dsn=SENTRY_DSN,
        # Set traces_sample_rate to 1.0 to capture 100%
        # of transactions for performance monitoring.
        traces_sample_rate=float(os.getenv("SENTRY_TRACES_SAMPLE_RATE", "0.0")),
    )
