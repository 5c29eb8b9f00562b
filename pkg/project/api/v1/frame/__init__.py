from .frame import router  # re-export for create_app
