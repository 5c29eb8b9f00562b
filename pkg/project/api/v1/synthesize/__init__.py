from .synthesize import router  # re-export for create_app
