from .app import HashEncoder, create_app, load_encoder

__version__ = "0.1.0"
