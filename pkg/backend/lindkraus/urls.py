from django.urls import path
from . import views

urlpatterns = [
    path('health/', views.health_check, name='health_check'),
    path('evolve/', views.evolve, name='evolve'),
    path('kraus/', views.kraus, name='kraus'),
]
