"""Command-line entry point: serve the API, seed demo data, export docs."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from cacao_kms.api.config import ServiceConfig, env_default


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cacao-kms",
        description="Knowledge management service for CACAO 2.0 security playbooks.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    serve = sub.add_parser("serve", help="run the HTTP service")
    _add_service_flags(serve)

    seed = sub.add_parser("seed", help="populate a data directory with demo playbooks")
    seed.add_argument("--data-dir", default=env_default("DATA_DIR"), required=False)
    seed.add_argument("--count", type=int, default=25)
    seed.add_argument("--seed", type=int, default=20250101, help="corpus RNG seed")

    docs = sub.add_parser("export-docs", help="write route documentation into a directory")
    docs.add_argument("--out", default="docs")

    return parser


def _add_service_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--bind", default=env_default("BIND", "127.0.0.1:8080"))
    parser.add_argument("--data-dir", default=env_default("DATA_DIR"))
    parser.add_argument(
        "--executor",
        choices=("simulator", "remote"),
        default=env_default("EXECUTOR", "simulator"),
    )
    parser.add_argument("--executor-url", default=env_default("EXECUTOR_URL"))
    parser.add_argument(
        "--poll-interval-ms",
        type=int,
        default=int(env_default("POLL_INTERVAL_MS", "2000")),
    )
    parser.add_argument(
        "--log-format", choices=("json", "text"), default=env_default("LOG_FORMAT", "text")
    )
    parser.add_argument("--ui-dir", default=env_default("UI_DIR"))


def _config_from_args(args: argparse.Namespace) -> ServiceConfig:
    config = ServiceConfig(
        bind=args.bind,
        data_dir=Path(args.data_dir) if args.data_dir else None,
        executor=args.executor,
        executor_url=args.executor_url,
        poll_interval_ms=args.poll_interval_ms,
        log_format=args.log_format,
        ui_dir=Path(args.ui_dir) if args.ui_dir else _default_ui_dir(),
    )
    config.validate()
    return config


def _default_ui_dir() -> Path | None:
    candidate = Path(__file__).resolve().parents[2] / "frontend" / "dist"
    return candidate if candidate.is_dir() else None


def _configure_logging(log_format: str) -> None:
    if log_format == "json":
        handler = logging.StreamHandler()
        handler.setFormatter(_JsonFormatter())
        logging.basicConfig(level=logging.INFO, handlers=[handler])
    else:
        logging.basicConfig(
            level=logging.INFO, format="%(asctime)s %(levelname)s %(name)s %(message)s"
        )


class _JsonFormatter(logging.Formatter):
    def format(self, record: logging.LogRecord) -> str:
        entry = {
            "ts": self.formatTime(record),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }
        if record.exc_info:
            entry["exc"] = self.formatException(record.exc_info)
        return json.dumps(entry)


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from cacao_kms.api.app import create_app

    config = _config_from_args(args)
    _configure_logging(config.log_format)
    app = create_app(config)
    uvicorn.run(app, host=config.host, port=config.port, log_level="info")
    return 0


def _cmd_seed(args: argparse.Namespace) -> int:
    from cacao_kms.core.model import Playbook
    from cacao_kms.seed import demo_corpus
    from cacao_kms.store import DocumentStore, PlaybookStore

    if not args.data_dir:
        print("seed requires --data-dir (or CACAO_KMS_DATA_DIR)", file=sys.stderr)
        return 2
    with DocumentStore(Path(args.data_dir)) as docs:
        playbooks = PlaybookStore(docs)
        for doc in demo_corpus(args.count, seed=args.seed):
            playbooks.save(Playbook.from_dict(doc))
        print(f"seeded {args.count} playbooks into {args.data_dir}")
    return 0


def _cmd_export_docs(args: argparse.Namespace) -> int:
    from cacao_kms.api.app import create_app
    from cacao_kms.api.docgen import write_docs

    app = create_app()
    out = Path(args.out)
    written = write_docs(app, out)
    for path in written:
        print(f"wrote {path}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    if args.command == "serve":
        return _cmd_serve(args)
    if args.command == "seed":
        return _cmd_seed(args)
    return _cmd_export_docs(args)


if __name__ == "__main__":
    sys.exit(main())
