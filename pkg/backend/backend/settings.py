"""
Django settings for the lindkraus project.

The project hosts one domain app, ``lindkraus``: the Kraus-form Lindblad
solver, its management commands (evolve, kraus, crosscheck, bench) and a small
JSON API. There is no database; every computation is stateless.
"""

from pathlib import Path
import os

# Build paths inside the project like this: BASE_DIR / 'subdir'.
BASE_DIR = Path(__file__).resolve().parent.parent


# SECURITY WARNING: keep the secret key used in production secret!
SECRET_KEY = os.getenv('SECRET_KEY', 'django-insecure-lindkraus-dev-key-change-in-production')

# SECURITY WARNING: don't run with debug turned on in production!
DEBUG = os.getenv('DJANGO_DEBUG', 'True').lower() == 'true'

ALLOWED_HOSTS = os.getenv('DJANGO_ALLOWED_HOSTS', '*').split(',')


# Application definition

INSTALLED_APPS = [
    'django.contrib.auth',
    'django.contrib.contenttypes',
    'rest_framework',
    'corsheaders',
    'lindkraus',
]

MIDDLEWARE = [
    'corsheaders.middleware.CorsMiddleware',
    'django.middleware.security.SecurityMiddleware',
    'django.middleware.common.CommonMiddleware',
]

ROOT_URLCONF = 'backend.urls'

WSGI_APPLICATION = 'backend.wsgi.application'


# No models; the solver keeps no state between requests.

DATABASES = {}


# Internationalization

LANGUAGE_CODE = 'en-us'

TIME_ZONE = 'UTC'

USE_I18N = True

USE_TZ = True


# Django REST Framework settings
REST_FRAMEWORK = {
    'DEFAULT_AUTHENTICATION_CLASSES': [],
    'DEFAULT_PERMISSION_CLASSES': [
        'rest_framework.permissions.AllowAny',
    ],
    'DEFAULT_RENDERER_CLASSES': [
        'rest_framework.renderers.JSONRenderer',
    ],
    'UNAUTHENTICATED_USER': None,
}

# CORS settings
_env_frontend_origins = [o for o in os.getenv('FRONTEND_ORIGINS', '').split(',') if o]
CORS_ALLOWED_ORIGINS = _env_frontend_origins

CORS_ALLOW_ALL_ORIGINS = DEBUG


# Solver settings
LINDKRAUS = {
    # The dense oracle stores an N^2 x N^2 complex matrix: 268 MB at N = 64.
    'ORACLE_MAX_DIM': int(os.getenv('LINDKRAUS_ORACLE_MAX_DIM', '64')),
    # Overrides for lindkraus.core.Tolerances, e.g. {'trace': 1e-10}.
    'TOLERANCES': {},
}


# Logging
LINDKRAUS_LOG = os.getenv('LINDKRAUS_LOG', 'WARNING').upper()

LOGGING = {
    'version': 1,
    'disable_existing_loggers': False,
    'formatters': {
        'plain': {
            'format': '%(asctime)s %(levelname)s %(name)s: %(message)s',
        },
    },
    'handlers': {
        'console': {
            'class': 'logging.StreamHandler',
            'formatter': 'plain',
        },
    },
    'loggers': {
        'lindkraus': {
            'handlers': ['console'],
            'level': LINDKRAUS_LOG,
            'propagate': False,
        },
    },
}
