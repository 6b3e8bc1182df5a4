"""
Command-line interface for cavity-eh.

Provides commands for mode tables, amplitudes, resonance scans, the
sensitivity estimate, the verification suite, unit conversion and
configuration management.
"""

import json
import math
from collections import OrderedDict
from pathlib import Path
from typing import Any, Dict, List, NoReturn, Optional

import sympy
import typer
import yaml
from rich import print as rprint
from rich.console import Console
from rich.table import Table

from cavity_eh.cache import configure_cache
from cavity_eh.config import AppConfig, load_config
from cavity_eh.exceptions import (
    DegenerateResonanceError,
    MissingPumpError,
    ModeValidationError,
    OffResonanceError,
    UnitConversionError,
)
from cavity_eh.log import configure_logging
from cavity_eh.models import (
    CavityGeometry,
    GeometryFamily,
    ModeFamily,
    ProcessParameters,
)
from cavity_eh.modes import enumerate_modes, mode_frequency
from cavity_eh.registry import get_registry
from cavity_eh.units import convert_units, get_constants, parse_quantity

app = typer.Typer(
    name="cavity-eh",
    help="Four-photon amplitudes and signal estimates for rectangular cavities",
    add_completion=False,
)
console = Console()
err_console = Console(stderr=True)

_HINTS = {
    OffResonanceError: "Run 'cavity-eh resonance-scan' to find a resonant geometry",
    MissingPumpError: "Set --F0 or pump occupations in the experiment config section",
    UnitConversionError: "Units look like 'T', 'mT', 'cm', 'K', 'eV^2' or 'eV^-4'",
    ModeValidationError: "Mode labels look like 'TE011', 'TM(1,10,0)' or '1D-y:3'",
    DegenerateResonanceError: "The three modes share one frequency; pick another triple",
}


def _setup(config_file: Optional[str], **overrides: Any) -> AppConfig:
    """Load configuration, apply CLI flags and configure logging and cache."""
    config = load_config(yaml_path=config_file).with_overrides(**overrides)
    configure_logging(config.logging)
    configure_cache(config.cache)
    return config


def _fail(e: Exception) -> NoReturn:
    rprint(f"[red]Error: {e}[/red]")
    for error_type, hint in _HINTS.items():
        if isinstance(e, error_type):
            rprint(f"[yellow]Hint: {hint}[/yellow]")
            break
    raise typer.Exit(1)


def _json_default(value: Any) -> Any:
    if isinstance(value, (sympy.Basic, complex)):
        return str(value)
    if isinstance(value, tuple):
        return list(value)
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def _sanitize(value: Any) -> Any:
    """Replace non-finite floats, which json cannot represent."""
    if isinstance(value, float) and not math.isfinite(value):
        return "inf" if value > 0 else ("-inf" if value < 0 else "nan")
    if isinstance(value, dict):
        return OrderedDict((k, _sanitize(v)) for k, v in value.items())
    if isinstance(value, (list, tuple)):
        return [_sanitize(v) for v in value]
    return value


def _emit_json(data: Any, config: AppConfig, out: Optional[str] = None) -> None:
    text = json.dumps(
        _sanitize(data), indent=config.output.indent, ensure_ascii=False, default=_json_default
    )
    if out:
        path = Path(out)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text + "\n", encoding="utf-8")
        rprint(f"[green]✓ Written: {out}[/green]")
    else:
        typer.echo(text)


def _fmt(value: Any, digits: int) -> str:
    if isinstance(value, float):
        return f"{value:.{digits}g}"
    if value is None:
        return "-"
    return str(value)


@app.command()
def modes(
    geom: str = typer.Option("1:1:0.4859", "--geom", "-g", help="Proportions Lx:Ly:Lz"),
    lz: str = typer.Option("0.2", "--Lz", help="Length of the z side (default unit m)"),
    list_max: int = typer.Option(3, "--list-max", "-n", help="Largest mode index"),
    family: Optional[str] = typer.Option(None, "--family", "-f", help="Only TE or TM"),
    output_format: Optional[str] = typer.Option(
        None, "--format", help="Output format: table or json"
    ),
    config_file: Optional[str] = typer.Option(
        None, "--config", "-c", help="Path to configuration file"
    ),
) -> None:
    """
    List box modes sorted by frequency.

    Examples:
        cavity-eh modes --geom 1:1:0.4859 --Lz 0.2 --list-max 3

        cavity-eh modes --family TM --format json
    """
    try:
        config = _setup(config_file, output__format=output_format)
        lz_m = parse_quantity(lz, "m").to("m")
        geometry = CavityGeometry.parse(geom, lz=lz_m)
        families = [ModeFamily(family.upper())] if family else [ModeFamily.TE, ModeFamily.TM]
        hbar_c = get_constants().value("hbar_c")

        rows: List[Dict[str, Any]] = []
        for mode in enumerate_modes(list_max, families):
            k = float(sympy.N(mode_frequency(geometry, mode)))
            rows.append(
                OrderedDict([("mode", mode.label), ("omega_per_m", k), ("omega_ev", k * hbar_c)])
            )
        rows.sort(key=lambda row: (row["omega_per_m"], row["mode"]))

        if config.output.format == "json":
            _emit_json(rows, config)
            return

        digits = config.output.significant_figures
        table = Table(title=f"Modes of {geom} box, L_z = {lz_m:g} m")
        table.add_column("Mode", style="cyan")
        table.add_column("ω [1/m]", style="green")
        table.add_column("ω [eV]", style="green")
        for row in rows:
            table.add_row(row["mode"], _fmt(row["omega_per_m"], digits), _fmt(row["omega_ev"], digits))
        console.print(table)

    except typer.Exit:
        raise
    except Exception as e:
        _fail(e)


@app.command()
def amplitude(
    process: str = typer.Option(
        "2to2", "--process", "-p", help="2to2, 3to1-1d, 3to1-3d or coherent"
    ),
    geom: Optional[str] = typer.Option(
        None, "--geom", "-g", help="Lx:Ly:Lz or 'symbolic' (default depends on process)"
    ),
    lz: Optional[float] = typer.Option(None, "--Lz", help="Anchor L_z for proportions"),
    kappa: Optional[float] = typer.Option(None, "--kappa", help="Coupling κ"),
    beta: Optional[float] = typer.Option(None, "--beta", help="Ratio β"),
    pump: str = typer.Option("TE011", "--pump", help="Pump mode (2to2, coherent)"),
    signals: str = typer.Option("TM110,TM130", "--signals", help="Signal modes"),
    pumps: str = typer.Option("TE011,TE011,TE011", "--pumps", help="3to1-3d pumps"),
    signal: str = typer.Option("TE033", "--signal", help="3to1-3d signal"),
    n: int = typer.Option(1, "--n", help="Slab pump harmonic"),
    p: int = typer.Option(1, "--p", help="Third slab pump harmonic"),
    polarizations: str = typer.Option(
        "yyyy", "--pols", help="Slab polarisations i j l s"
    ),
    signal_harmonic: Optional[int] = typer.Option(
        None, "--signal-harmonic", help="Slab signal harmonic (default 2n+p)"
    ),
    xi: float = typer.Option(1.0, "--xi", help="Coherent pump amplitude"),
    eta: float = typer.Option(1.0, "--eta", help="Coherent partner amplitude"),
    monomial: Optional[str] = typer.Option(
        None, "--monomial", help="Component monomial to report, e.g. EyEyEyEy"
    ),
    out: Optional[str] = typer.Option(None, "--out", "-o", help="Write JSON to a file"),
    config_file: Optional[str] = typer.Option(
        None, "--config", "-c", help="Path to configuration file"
    ),
) -> None:
    """
    Evaluate a transition amplitude and print it as JSON.

    Examples:
        cavity-eh amplitude --process 2to2

        cavity-eh amplitude --process 3to1-1d --n 1 --p 2 --pols yyzz

        cavity-eh amplitude --process coherent --xi 2 --eta 0.5
    """
    try:
        config = _setup(config_file, couplings__kappa=kappa, couplings__beta=beta)
        registry = get_registry()
        params = ProcessParameters(
            geometry=geom,
            lz=lz,
            pump=pump,
            signals=tuple(s.strip() for s in signals.split(",")),
            pumps=tuple(s.strip() for s in pumps.split(",")),
            signal=signal,
            n=n,
            p=p,
            polarizations=polarizations,
            signal_harmonic=signal_harmonic,
            xi=xi,
            eta=eta,
            monomial=monomial,
        )
        instance = registry.get_process(process, params)
        if instance is None:
            rprint(f"[red]Error: Unknown process '{process}'[/red]")
            names = ", ".join(a for n_ in registry.list_processes() for a in registry.aliases(n_))
            rprint(f"[yellow]Known processes: {names}[/yellow]")
            raise typer.Exit(1)

        _emit_json(instance.evaluate(config.couplings.to_couplings()), config, out)

    except typer.Exit:
        raise
    except Exception as e:
        _fail(e)


@app.command("resonance-scan")
def resonance_scan(
    max_index: Optional[int] = typer.Option(
        None, "--max-index", "-n", help="Largest index (<= 8)"
    ),
    family: str = typer.Option("1:1:r", "--family", "-f", help="Geometry family a:b:r"),
    r_min: Optional[float] = typer.Option(
        None, "--r-min", help="Smallest aspect ratio"
    ),
    r_max: Optional[float] = typer.Option(None, "--r-max", help="Largest aspect ratio"),
    output_format: Optional[str] = typer.Option(
        None, "--format", help="Output format: table or json"
    ),
    out: Optional[str] = typer.Option(
        None, "--out", "-o", help="Write JSON rows to a file"
    ),
    config_file: Optional[str] = typer.Option(
        None, "--config", "-c", help="Path to configuration file"
    ),
) -> None:
    """
    Find resonant (pump; sig1, sig2) triples.

    Examples:
        cavity-eh resonance-scan --max-index 3

        cavity-eh resonance-scan --max-index 4 --family 2:1:r --out hits.json
    """
    try:
        from cavity_eh.resonance import scan_resonances

        family_model = GeometryFamily.parse(family)
        config = _setup(
            config_file,
            resonance__max_index=max_index,
            resonance__r_min=r_min,
            resonance__r_max=r_max,
            resonance__xy_ratio=family_model.xy_ratio,
            output__format=output_format,
        )
        settings = config.resonance
        hits = scan_resonances(
            settings.max_index,
            (settings.r_min, settings.r_max),
            GeometryFamily(xy_ratio=settings.xy_ratio),
            settings.grid_points,
        )
        rows = [hit.to_row() for hit in hits]

        if out or config.output.format == "json":
            _emit_json(rows, config, out)
            if not out:
                return

        digits = config.output.significant_figures
        table = Table(title=f"Resonances in the {family_model.label} family ({len(rows)})")
        table.add_column("Pump", style="cyan")
        table.add_column("Signal 1", style="cyan")
        table.add_column("Signal 2", style="cyan")
        table.add_column("r", style="green")
        table.add_column("Residual", style="yellow")
        for row in rows:
            table.add_row(
                row["pump"], row["sig1"], row["sig2"], _fmt(row["r"], digits), _fmt(row["residual"], 2)
            )
        console.print(table)

    except typer.Exit:
        raise
    except Exception as e:
        _fail(e)


@app.command()
def experiment(
    lz: Optional[str] = typer.Option(
        None, "--Lz", help="Cavity length, e.g. 0.2 or 20cm"
    ),
    f0: Optional[str] = typer.Option(None, "--F0", help="Pump field, e.g. 0.1T"),
    quality_factor: Optional[float] = typer.Option(None, "--Q", help="Quality factor"),
    temperature: Optional[str] = typer.Option(None, "--T", help="Temperature, e.g. 1K"),
    snr: Optional[float] = typer.Option(
        None, "--snr", help="Target signal-to-noise ratio"
    ),
    kappa: Optional[float] = typer.Option(
        None, "--kappa", help="κ in eV^-4 (default QED)"
    ),
    beta: Optional[float] = typer.Option(None, "--beta", help="Ratio β"),
    aspect_ratio: Optional[float] = typer.Option(
        None, "--aspect-ratio", "-r", help="Aspect ratio (default: resonant root)"
    ),
    omega_s: Optional[str] = typer.Option(
        None, "--omega-s", help="Signal frequency override"
    ),
    coherence_time: Optional[str] = typer.Option(
        None, "--coherence-time", help="Coherence time override, e.g. 1s"
    ),
    out: Optional[str] = typer.Option(None, "--out", "-o", help="Write JSON to a file"),
    config_file: Optional[str] = typer.Option(
        None, "--config", "-c", help="Path to configuration file"
    ),
) -> None:
    """
    Estimate signal generation and measurement time.

    Examples:
        cavity-eh experiment --Lz 0.2 --F0 0.1T --Q 1e10 --T 1K --snr 5

        cavity-eh experiment --Lz 20cm --F0 100mT --beta 0
    """
    try:
        from cavity_eh.experiment import run_experiment

        def quantity(text: Optional[str], unit: str) -> Optional[float]:
            return None if text is None else parse_quantity(text, unit).to(unit)

        config = _setup(
            config_file,
            experiment__lz=quantity(lz, "m"),
            experiment__pump_field=quantity(f0, "T"),
            experiment__quality_factor=quality_factor,
            experiment__temperature=quantity(temperature, "K"),
            experiment__snr=snr,
            experiment__kappa=kappa,
            experiment__beta=beta,
            experiment__aspect_ratio=aspect_ratio,
            experiment__omega_s=quantity(omega_s, "eV"),
            experiment__coherence_time=quantity(coherence_time, "s"),
        )
        report = run_experiment(config.experiment)

        for warning in config.validate_config()["warnings"]:
            err_console.print(f"[yellow]⚠ {warning}[/yellow]")
        _emit_json(report.to_dict(), config, out)

    except typer.Exit:
        raise
    except Exception as e:
        _fail(e)


@app.command()
def verify(
    check: Optional[List[str]] = typer.Option(
        None, "--check", help="Run only the named checks (repeatable)"
    ),
    config_file: Optional[str] = typer.Option(
        None, "--config", "-c", help="Path to configuration file"
    ),
) -> None:
    """
    Run the cross-check suite and print pass/fail per check.

    Examples:
        cavity-eh verify

        cavity-eh verify --check m22_closed_form --check tesla_conversion
    """
    try:
        from cavity_eh.verification import run_verification

        _setup(config_file)
        results = run_verification(check or None)

        table = Table(title="Verification")
        table.add_column("Check", style="cyan")
        table.add_column("Result", style="green")
        table.add_column("Detail", style="white")
        for result in results:
            status = "[green]✓ pass[/green]" if result.passed else "[red]✗ fail[/red]"
            table.add_row(result.name, status, result.detail)
        console.print(table)

        failed = [r.name for r in results if not r.passed]
        if failed:
            rprint(f"[red]✗ {len(failed)} of {len(results)} checks failed[/red]")
            raise typer.Exit(1)
        rprint(f"[green]✓ All {len(results)} checks passed[/green]")

    except typer.Exit:
        raise
    except Exception as e:
        _fail(e)


@app.command()
def convert(
    value: float = typer.Argument(..., help="Value to convert"),
    from_unit: str = typer.Argument(..., help="Source unit, e.g. T"),
    to_unit: str = typer.Argument(..., help="Target unit, e.g. eV^2"),
) -> None:
    """
    Convert between SI and natural units.

    Examples:
        cavity-eh convert 1 T eV^2

        cavity-eh convert 20 cm eV^-1
    """
    try:
        result = convert_units(value, from_unit, to_unit)
        rprint(f"[cyan]{value:g} {from_unit}[/cyan] = [green]{result:.10g} {to_unit}[/green]")
    except Exception as e:
        _fail(e)


# Configuration management commands
config_app = typer.Typer(help="Configuration management commands")
app.add_typer(config_app, name="config")


@config_app.command("init")
def config_init(
    output: str = typer.Option(
        "config.yaml", "--output", "-o", help="Output configuration file path"
    ),
    template: str = typer.Option(
        "standard", "--template", "-t", help="Template: minimal or standard"
    ),
) -> None:
    """
    Initialize a configuration file with default settings.

    Examples:
        cavity-eh config init

        cavity-eh config init --template minimal --output config/minimal.yaml
    """
    try:
        from cavity_eh.config import create_default_config

        if template not in ("minimal", "standard"):
            raise ValueError(f"Unknown template '{template}'; use minimal or standard")

        config = create_default_config()
        if template == "minimal":
            data = {
                "couplings": config.couplings.model_dump(),
                "experiment": config.experiment.model_dump(
                    include={"quality_factor", "pump_field", "lz", "temperature", "snr"}
                ),
            }
            path = Path(output)
            path.parent.mkdir(parents=True, exist_ok=True)
            with open(path, "w", encoding="utf-8") as f:
                yaml.safe_dump(data, f, default_flow_style=False, sort_keys=False)
        else:
            config.to_yaml(output)

        rprint(f"[green]✓ Configuration file created: {output}[/green]")
        rprint(f"[cyan]Template: {template}[/cyan]")
        rprint("[yellow]Edit the file to customize settings[/yellow]")

    except Exception as e:
        _fail(e)


@config_app.command("validate")
def config_validate(
    config_file: str = typer.Option(
        "config.yaml", "--config", "-c", help="Path to configuration file"
    ),
) -> None:
    """
    Validate a configuration file.

    Examples:
        cavity-eh config validate

        cavity-eh config validate --config config/config.standard.yaml
    """
    try:
        config = load_config(yaml_path=config_file)
        results = config.validate_config()

        if results["valid"]:
            rprint("[green]✓ Configuration is valid[/green]")
        else:
            rprint("[red]✗ Configuration has issues[/red]")

        table = Table(title="Configuration Summary")
        table.add_column("Metric", style="cyan")
        table.add_column("Value", style="green")
        table.add_row("Issues", str(results["issue_count"]))
        table.add_row("Warnings", str(results["warning_count"]))
        console.print(table)

        if results["issues"]:
            rprint("\n[red bold]Issues:[/red bold]")
            for issue in results["issues"]:
                rprint(f"[red]  ✗ {issue}[/red]")

        if results["warnings"]:
            rprint("\n[yellow bold]Warnings:[/yellow bold]")
            for warning in results["warnings"]:
                rprint(f"[yellow]  ⚠ {warning}[/yellow]")

        if not results["valid"]:
            raise typer.Exit(1)

    except typer.Exit:
        raise
    except FileNotFoundError:
        rprint(f"[red]Error: Configuration file not found: {config_file}[/red]")
        rprint("[yellow]Hint: Create one with 'cavity-eh config init'[/yellow]")
        raise typer.Exit(1)
    except Exception as e:
        _fail(e)


@config_app.command("show")
def config_show(
    config_file: Optional[str] = typer.Option(
        None, "--config", "-c", help="Path to configuration file"
    ),
    section: Optional[str] = typer.Option(
        None,
        "--section",
        "-s",
        help="Show one section (couplings, experiment, resonance, cache, logging, output)",
    ),
) -> None:
    """
    Display current configuration.

    Examples:
        cavity-eh config show

        cavity-eh config show --section experiment
    """
    try:
        config = load_config(yaml_path=config_file)
        sections = config.model_dump(mode="json")

        if section:
            if section not in sections:
                raise ValueError(f"Unknown section '{section}'")
            table = Table(title=f"{section.capitalize()} Configuration")
            table.add_column("Setting", style="cyan")
            table.add_column("Value", style="green")
            for key, value in sections[section].items():
                table.add_row(key, _fmt(value, config.output.significant_figures))
            console.print(table)
            return

        rprint("[cyan bold]Configuration Overview[/cyan bold]")
        rprint(f"Couplings: [green]κ = {config.couplings.kappa:g}, β = {config.couplings.beta:g}[/green]")
        rprint(f"Pump: [green]{config.experiment.pump} -> {', '.join(config.experiment.signals)}[/green]")
        rprint(f"Quality factor: [green]{config.experiment.quality_factor:g}[/green]")
        rprint(f"Resonance scan: [green]max index {config.resonance.max_index}[/green]")
        rprint(f"Cache: [green]{'Enabled' if config.cache.enabled else 'Disabled'}[/green]")
        rprint(f"Logging: [green]{config.logging.level}[/green]")
        rprint(f"Output: [green]{config.output.format}[/green]")

    except FileNotFoundError:
        rprint(f"[red]Error: Configuration file not found: {config_file}[/red]")
        raise typer.Exit(1)
    except Exception as e:
        _fail(e)


@app.command()
def version() -> None:
    """Show version information."""
    from cavity_eh import __version__

    rprint(f"[cyan]cavity-eh version {__version__}[/cyan]")


if __name__ == "__main__":
    app()
