from django.apps import AppConfig


class ParetoConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "pareto"
