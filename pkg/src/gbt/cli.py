"""``gbt`` command line: teleport, verify, spectrum, demo-degenerate.

JSON mode writes one object per line on stdout. Exit codes: 0 success,
1 a check or fidelity failed, 2 usage or configuration error.
"""
from __future__ import annotations

import json
import sys

import click
import numpy as np

from . import reference
from .bell import BellIndex, all_indices, bell_state
from .linalg import eig_hermitian
from .teleport import (
    DegenerateObservableError,
    make_config,
    random_input,
    run_degenerate_demo,
    run_teleport,
)
from .verify import SUITES, run_suite
from .weyl import ObservableSpec, build_observable, pauli

SPECTRUM_PRESETS = ("op12", "op13", "good-d2", "good-d3")


def _emit(obj: dict) -> None:
    click.echo(json.dumps(obj))


def parse_amplitudes(text: str) -> list[complex]:
    """``"0.6,0.8"`` or ``"0.5+0.5j,0.7071"`` -> complex amplitudes."""
    out = []
    for tok in text.split(","):
        tok = tok.strip().replace(" ", "")
        if not tok:
            raise ValueError(f"empty entry in amplitude list {text!r}")
        try:
            out.append(complex(tok))
        except ValueError:
            raise ValueError(f"cannot parse amplitude {tok!r}") from None
    return out


def _parse_ints(text: str, n: int, what: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(t) for t in text.split(","))
    except ValueError:
        raise click.BadParameter(f"expected {n} comma-separated integers", param_hint=what) from None
    if len(vals) != n:
        raise click.BadParameter(f"expected {n} comma-separated integers", param_hint=what)
    return vals


def _parse_floats(text: str, what: str) -> tuple[float, ...]:
    try:
        return tuple(float(t) for t in text.split(","))
    except ValueError:
        raise click.BadParameter("expected comma-separated numbers", param_hint=what) from None


def ket_string(amps, digits: int = 6) -> str:
    d = len(amps)
    terms = []
    for j, a in enumerate(amps):
        a = complex(round(a.real, digits), round(a.imag, digits))
        if a == 0:
            continue
        coeff = f"{a.real:g}" if a.imag == 0 else f"({a.real:g}{a.imag:+g}i)"
        terms.append(f"{coeff}|{j}>")
    return " + ".join(terms) if terms else "0"


seed_option = click.option(
    "--seed", type=click.IntRange(0, 2**64 - 1), envvar="GBT_SEED", default=0, show_default=True,
    help="64-bit seed; falls back to $GBT_SEED.",
)
json_option = click.option("--json", "as_json", is_flag=True, help="Newline-delimited JSON on stdout.")


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def main():
    """Teleportation with generalized Bell states."""


@main.command()
@click.option("--dim", type=click.IntRange(2, 8), default=None, help="Qudit dimension d.")
@click.option("--input", "input_text", default="random", show_default=True, help="Amplitudes 're[+imj],...' or 'random'.")
@click.option("--normalize", is_flag=True, help="Normalize the input instead of rejecting it.")
@click.option("--resource", default=None, help="Shared Bell pair as 'm,n' (default 0,0).")
@click.option("--preset", type=click.Choice(["paper-d2", "paper-d3"]), default=None)
@click.option("--observable", default=None, help="Alice's d^2 eigenvalues, comma-separated.")
@seed_option
@click.option("--trials", type=click.IntRange(1), default=1, show_default=True)
@json_option
def teleport(dim, input_text, normalize, resource, preset, observable, seed, trials, as_json):
    """Run the protocol; one report per trial."""
    if dim is None and preset is None:
        dim = 2
    d = dim if preset is None else int(preset[-1])
    res = _parse_ints(resource, 2, "--resource") if resource else None
    obs = _parse_floats(observable, "--observable") if observable else None
    fixed_input = None
    if input_text != "random":
        try:
            fixed_input = parse_amplitudes(input_text)
        except ValueError as exc:
            raise click.BadParameter(str(exc), param_hint="--input") from None

    all_ok = True
    for t in range(trials):
        amps = fixed_input if fixed_input is not None else random_input(d, np.random.default_rng([seed, t]))
        try:
            cfg = make_config(
                dim, amps, resource=res, observable=obs, seed=(seed + t) % 2**64, preset=preset, normalize=normalize
            )
            report = run_teleport(cfg)
        except DegenerateObservableError as exc:
            raise click.UsageError(f"degenerate observable: {exc}") from None
        except ValueError as exc:
            raise click.UsageError(str(exc)) from None
        all_ok &= report.success
        if as_json:
            _emit({"trial": t, **report.to_dict()})
        else:
            click.echo(
                f"trial {t}: outcome {BellIndex.from_flat(report.message, d).label()} "
                f"(eigenvalue {report.outcome.eigenvalue:.6g}, p={report.outcome.probability:.6f}) "
                f"correction [{report.correction.label()}] bob = {ket_string(report.bob_state.amps)} "
                f"fidelity {report.fidelity:.12f} {'ok' if report.success else 'FAIL'}"
            )
    if not all_ok:
        click.echo("teleportation fidelity below 1 - 1e-9", err=True)
        sys.exit(1)


@main.command()
@click.option("--suite", type=click.Choice(("all",) + SUITES), default="all", show_default=True)
@click.option("--dim", type=click.IntRange(2, 8), default=3, show_default=True)
@seed_option
@json_option
def verify(suite, dim, seed, as_json):
    """Check the Bell-basis, expansion, projector and correction identities."""
    checks = run_suite(suite, dim, seed)
    for c in checks:
        if as_json:
            _emit(c.to_dict())
        else:
            note = f"  ({c.note})" if c.note else ""
            click.echo(f"{'PASS' if c.passed else 'FAIL'}  {c.suite}/{c.check}  max_error={c.max_error:.3e} tol={c.tolerance:g}{note}")
    if not all(c.passed for c in checks):
        sys.exit(1)


def _spectrum_matrix(preset, dim, observable):
    if preset == "op12":
        return 2, np.kron(pauli(1), pauli(1)) + np.kron(pauli(2), pauli(2))
    if preset == "op13":
        return 2, np.kron(pauli(1), pauli(1)) + np.kron(pauli(3), pauli(3))
    if preset == "good-d2":
        return 2, build_observable(ObservableSpec(2, reference.GOOD_D2_EIGENVALUES))
    if preset == "good-d3":
        return 3, build_observable(ObservableSpec.default(3))
    if observable is None:
        raise click.UsageError("spectrum needs --preset or --observable")
    d = dim or 2
    try:
        return d, build_observable(ObservableSpec(d, _parse_floats(observable, "--observable")))
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None


@main.command()
@click.option("--preset", type=click.Choice(SPECTRUM_PRESETS), default=None)
@click.option("--dim", type=click.IntRange(2, 8), default=None)
@click.option("--observable", default=None, help="Bell-diagonal eigenvalues, comma-separated.")
@json_option
def spectrum(preset, dim, observable, as_json):
    """Eigenvalues, multiplicities and eigenspaces of an observable on two qudits."""
    d, q = _spectrum_matrix(preset, dim, observable)
    sf = eig_hermitian(q)
    spaces = []
    for p in sf.projectors:
        members = [i.flat for i in all_indices(d) if abs(np.vdot(bell_state(i).amps, p @ bell_state(i).amps) - 1) < 1e-8]
        spaces.append(members)
    result = {
        "preset": preset,
        "dim": d,
        "eigenvalues": [round(v, 12) + 0.0 for v in sf.eigenvalues],
        "multiplicities": list(sf.multiplicities),
        "bell_members": spaces,
        "degenerate": sf.degenerate,
    }
    if as_json:
        _emit(result)
        return
    for lam, m, mem in zip(result["eigenvalues"], sf.multiplicities, spaces):
        names = ", ".join(BellIndex.from_flat(k, d).label() for k in mem)
        click.echo(f"{lam:+.6g}  multiplicity {m}  eigenspace span{{{names}}}")
    if sf.degenerate:
        click.echo("warning: degenerate spectrum; a measurement cannot single out one Bell state")


@main.command("demo-degenerate")
@click.option("--dim", type=click.IntRange(2, 2), default=2, help="Only d=2 is supported.")
@click.option("--input", "input_text", default="0.6,0.8", show_default=True)
@click.option("--normalize", is_flag=True)
@seed_option
@json_option
def demo_degenerate(dim, input_text, normalize, seed, as_json):
    """Compare s1(x)s1 + s3(x)s3 against the non-degenerate (3,1,-1,-3) observable."""
    try:
        amps = parse_amplitudes(input_text)
        bad = make_config(2, amps, resource=(1, 1), observable=(2.0, 0.0, 0.0, -2.0), seed=seed, normalize=normalize)
        good = make_config(None, amps, preset="paper-d2", seed=seed, normalize=normalize)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from None
    demo = run_degenerate_demo(bad)
    control = run_teleport(good)
    if as_json:
        _emit({"degenerate": demo.to_dict(), "control": control.to_dict()})
        return
    click.echo(f"input: {ket_string(np.array(bad.input_amps))}")
    click.echo("observable s1(x)s1 + s3(x)s3 (degenerate):")
    for o in demo.outcomes:
        names = ", ".join(BellIndex.from_flat(k, 2).label() for k in o.members)
        fids = ", ".join(f"{BellIndex.from_flat(k, 2).label()}-correction {f:.6f}" for k, f in o.table_fidelity.items())
        click.echo(
            f"  eigenvalue {o.eigenvalue:+.3g} [{names}] p={o.probability:.6f} "
            f"bob purity {o.bob_purity:.6f}; {fids}; best Weyl [{o.best_word.label()}] {o.best_fidelity:.6f}"
        )
    click.echo(f"  average fidelity: {demo.average_fidelity_table:.6f} (table), {demo.average_fidelity_best:.6f} (best Weyl)")
    click.echo(
        f"observable (3,1,-1,-3) (simple spectrum): outcome {BellIndex.from_flat(control.message, 2).label()}, "
        f"fidelity {control.fidelity:.12f}"
    )


if __name__ == "__main__":
    main()
