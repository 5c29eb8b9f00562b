from .verify import router  # re-export for create_app
