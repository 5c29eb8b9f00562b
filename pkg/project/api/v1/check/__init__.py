from .check import router  # re-export for create_app
