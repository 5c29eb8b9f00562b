from .partner import router  # re-export for create_app
