"""Run the embedding service: one model per process.

Model via --model or EMBED_MODEL, port via --port or EMBED_PORT.
"""

import argparse
import os

import uvicorn

from .app import create_app


def main() -> None:
    parser = argparse.ArgumentParser(prog="embed-service")
    parser.add_argument("--model", default=os.environ.get("EMBED_MODEL", "all-MiniLM-L12-v2"))
    parser.add_argument("--port", type=int, default=int(os.environ.get("EMBED_PORT", "8080")))
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument(
        "--normalize-default",
        action="store_true",
        help="normalize embeddings unless the request says otherwise",
    )
    args = parser.parse_args()
    app = create_app(args.model, normalize_default=args.normalize_default)
    uvicorn.run(app, host=args.host, port=args.port)


if __name__ == "__main__":
    main()
