import enum
import json
import logging
import sys
import typing

from PyQt6.QtCore import QCommandLineOption, QCommandLineParser, QCoreApplication

from masker.__version__ import VERSION
from masker.analysis.domain_probe import ProbeConfig, ProbeVariant
from masker.paths import create_run_dir, default_output_dir
from masker.settings.settings import Settings
from masker.train.config import KEY_HELP, Mode, default_value, resolve_config
from masker import workflow

USAGE_ERROR = 2
RUNTIME_ERROR = 1


class CommandLineError(Exception):
    def __init__(self, message: str):
        super().__init__(message)


class Command(enum.Enum):
    VOCAB_BUILD = "vocab-build"
    SYNTH_GEN = "synth-gen"
    TRAIN = "train"
    EVAL = "eval"
    CROSS_TRAIN = "cross-train"
    ANALYZE_MASKS = "analyze-masks"
    PROBE_DOMAINS = "probe-domains"
    VISUALIZE = "visualize"


class ProbeChoice(enum.Enum):
    ORIGINAL = ProbeVariant.ORIGINAL.value
    MASKED = ProbeVariant.MASKED.value
    MASKED_WORDS = ProbeVariant.MASKED_WORDS.value
    ALL = "all"


class Split(enum.Enum):
    DEV = "dev"
    TEST = "test"


COMMAND_HELP = {
    Command.VOCAB_BUILD: "Build a vocabulary file from the training texts",
    Command.SYNTH_GEN: "Write a planted-token synthetic dataset",
    Command.TRAIN: "Train on all domains (multi-domain protocol)",
    Command.EVAL: "Re-evaluate a run directory",
    Command.CROSS_TRAIN: "Train with one unlabeled target domain (cross-domain protocol)",
    Command.ANALYZE_MASKS: "Masking statistics and top masked words of a run",
    Command.PROBE_DOMAINS: "Domain classification on original and masked texts",
    Command.VISUALIZE: "Per-sentence mask records and SVG renderings of a run",
}

# Commands that read the flat training configuration.
CONFIG_COMMANDS = {
    Command.VOCAB_BUILD,
    Command.SYNTH_GEN,
    Command.TRAIN,
    Command.CROSS_TRAIN,
    Command.PROBE_DOMAINS,
}

_app: typing.Optional[QCoreApplication] = None


def application() -> QCoreApplication:
    global _app
    app = QCoreApplication.instance()
    if app is None:
        _app = app = QCoreApplication(["masker"])
    app.setApplicationName("masker")
    app.setApplicationVersion(VERSION)
    return app


def config_options() -> typing.Dict[Settings.Key, QCommandLineOption]:
    options = {}
    for key in Settings.Key:
        default = default_value(key)
        description = KEY_HELP[key]
        if default != "":
            description += f". Default: {default}."
        options[key] = QCommandLineOption([key.value], description, key.value)
    return options


def run(argv: typing.List[str]) -> int:
    """Runs one command; `argv` excludes the program name. Returns the exit
    status."""
    application()
    parser = QCommandLineParser()
    try:
        return parse(parser, ["masker"] + list(argv))
    except CommandLineError as exc:
        print(f"Error: {str(exc)}\n", file=sys.stderr)
        print(parser.helpText(), file=sys.stderr)
        return USAGE_ERROR
    except Exception as exc:
        logging.exception("Command failed")
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}), file=sys.stderr)
        return RUNTIME_ERROR


def parse(parser: QCommandLineParser, argv: typing.List[str]) -> int:
    commands = "\n".join(f"- {command.value}: {COMMAND_HELP[command]}" for command in Command)
    parser.addPositionalArgument("<command>", f"One of the following commands:\n{commands}")
    help_option = parser.addHelpOption()
    version_option = parser.addVersionOption()
    parser.parse(argv)

    args = parser.positionalArguments()
    if len(args) == 0:
        if parser.isSet(version_option):
            print(VERSION)
            return 0
        print(parser.helpText())
        return 0 if parser.isSet(help_option) else USAGE_ERROR

    try:
        command = Command(args[0])
    except ValueError:
        raise CommandLineError(f"Unknown command: {args[0]}") from None

    parser.clearPositionalArguments()
    parser.addPositionalArgument(command.value, COMMAND_HELP[command])

    key_options = config_options() if command in CONFIG_COMMANDS else {}
    config_option = QCommandLineOption(["c", "config"], "Flat key = value config file", "path")
    out_option = QCommandLineOption(
        ["o", "out"], f"Output directory. Default: {default_output_dir()}", "directory"
    )
    run_option = QCommandLineOption(["r", "run"], "Run directory of a trained model", "directory")
    checkpoint_option = QCommandLineOption(
        ["checkpoint"], "Same as --run: the run directory holding the checkpoint", "directory"
    )
    split_option = QCommandLineOption(
        ["split"], f"Split to use. Allowed: {join_values(Split)}. Default: test.", "split", "test"
    )
    k_option = QCommandLineOption(
        ["k", "top-k"], "Words per ranking. Default: 20.", "k", "20"
    )
    variant_option = QCommandLineOption(
        ["variant"],
        f"Probe variant. Allowed: {join_values(ProbeChoice)}. Default: all.",
        "variant",
        ProbeChoice.ALL.value,
    )
    probe_epochs_option = QCommandLineOption(
        ["probe-epochs"],
        "Maximum probe training epochs; stops early once training accuracy plateaus. Default: 30.",
        "epochs",
        "30",
    )
    limit_option = QCommandLineOption(
        ["limit"], "Examples per domain. Default: 5.", "count", "5"
    )
    quiet_option = QCommandLineOption(["q", "quiet"], "Only log warnings to stdout")

    parser.addOptions(list(key_options.values()))
    parser.addOptions(
        [
            config_option,
            out_option,
            run_option,
            checkpoint_option,
            split_option,
            k_option,
            variant_option,
            probe_epochs_option,
            limit_option,
            quiet_option,
        ]
    )

    if not parser.parse(argv):
        raise CommandLineError(parser.errorText())
    if parser.isSet(help_option):
        print(parser.helpText())
        return 0
    if len(parser.positionalArguments()) > 1:
        raise CommandLineError(
            f"Unexpected arguments: {' '.join(parser.positionalArguments()[1:])}"
        )
    if parser.isSet(quiet_option):
        for handler in logging.getLogger().handlers:
            if isinstance(handler, logging.StreamHandler) and handler.stream is sys.stdout:
                handler.setLevel(logging.WARNING)

    config = None
    if command in CONFIG_COMMANDS:
        overrides = {
            key: parser.value(option) for key, option in key_options.items() if parser.isSet(option)
        }
        if command == Command.CROSS_TRAIN:
            overrides[Settings.Key.MODE] = Mode.CROSS_DOMAIN.value
        try:
            config = resolve_config(parser.value(config_option) or None, overrides)
        except (ValueError, FileNotFoundError) as exc:
            raise CommandLineError(str(exc)) from exc

    out_dir = parser.value(out_option) or default_output_dir()
    run_dir = parser.value(run_option) or parser.value(checkpoint_option)
    split = parse_enum_option(split_option, parser, Split).value

    if command == Command.VOCAB_BUILD:
        workflow.run_vocab_build(config, parser.value(out_option) or "vocab.txt")
    elif command == Command.SYNTH_GEN:
        if not parser.isSet(out_option):
            raise CommandLineError("--out is required for synth-gen")
        workflow.run_synth_gen(config, out_dir)
    elif command == Command.TRAIN:
        paths = create_run_dir(out_dir, config.seed)
        workflow.run_training(config, paths)
        print(paths.root)
    elif command == Command.CROSS_TRAIN:
        paths = create_run_dir(out_dir, config.seed)
        if config.target.lower() == workflow.ALL_TARGETS:
            workflow.run_cross_domain_all(config, paths)
        else:
            workflow.run_training(config, paths)
        print(paths.root)
    elif command == Command.EVAL:
        report = workflow.run_eval(require_run(run_dir), split)
        print(report.to_json(sort_keys=True))
    elif command == Command.ANALYZE_MASKS:
        k = parse_int_option(k_option, parser)
        if k <= 0:
            raise CommandLineError("--top-k must be positive")
        workflow.run_analyze_masks(require_run(run_dir), k, split)
    elif command == Command.PROBE_DOMAINS:
        choice = parse_enum_option(variant_option, parser, ProbeChoice)
        variants = (
            list(ProbeVariant) if choice == ProbeChoice.ALL else [ProbeVariant(choice.value)]
        )
        needs_model = any(variant != ProbeVariant.ORIGINAL for variant in variants)
        if needs_model and run_dir == "":
            raise CommandLineError(
                "--run (or --checkpoint) is required for the masked probe variants"
            )
        probe_config = ProbeConfig(epochs=parse_int_option(probe_epochs_option, parser))
        if run_dir != "":
            context = workflow.load_run(run_dir)
            workflow.run_probe(variants, probe_config, context.paths, context=context)
        else:
            paths = create_run_dir(out_dir, config.seed)
            workflow.run_probe(variants, probe_config, paths, config=config)
            print(paths.root)
    elif command == Command.VISUALIZE:
        workflow.run_visualize(
            require_run(run_dir), parse_int_option(limit_option, parser), split
        )
    return 0


def require_run(run_dir: str) -> str:
    if run_dir == "":
        raise CommandLineError("--run is required")
    return run_dir


T = typing.TypeVar("T", bound=enum.Enum)


def parse_enum_option(
    option: QCommandLineOption, parser: QCommandLineParser, enum_class: typing.Type[T]
) -> T:
    try:
        return enum_class(parser.value(option))
    except ValueError:
        raise CommandLineError(f"Invalid value for --{option.names()[-1]} option.")


def parse_int_option(option: QCommandLineOption, parser: QCommandLineParser) -> int:
    try:
        return int(parser.value(option))
    except ValueError:
        raise CommandLineError(f"Invalid value for --{option.names()[-1]} option.")


def join_values(enum_class: typing.Type[enum.Enum]) -> str:
    return ", ".join([v.value for v in enum_class])
