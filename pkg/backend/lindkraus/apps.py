from django.apps import AppConfig


class LindkrausConfig(AppConfig):
    name = 'lindkraus'
    verbose_name = 'Lindblad Kraus solver'
