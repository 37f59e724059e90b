"""
URL configuration for the lindkraus project.

All endpoints live in the lindkraus app under /api/.
"""
from django.urls import path, include

urlpatterns = [
    path('api/', include('lindkraus.urls')),
]
