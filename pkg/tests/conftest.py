"""Shared fixtures: conformance vectors, a hand-driven trial world, and
the acceptance-line reporter that reprints criterion results after the run.
"""

from __future__ import annotations

import json
import time
from importlib import resources
from random import Random

import pytest

from vaccsc.commitment import Opening, ShotContent, commit, generate_nonce
from vaccsc.coinflip import RandomContribution, commit_contribution
from vaccsc.contract import CONTRACT_ID, TrialConfig
from vaccsc.keys import KeyPair
from vaccsc.ledger import Ledger, Receipt, make_transaction


def make_genesis(config: TrialConfig, commitments) -> dict:
    return {
        "contract": CONTRACT_ID,
        "deployer": config.developer.hex(),
        "params": {
            "config": config.to_dict(),
            "commitments": [c.hex() for c in commitments],
        },
    }


class World:
    """A trial driven operation by operation, with ground truth on the side.

    Unlike the scenario runner this gives tests exact control: who binds
    where, who gets sick in which order, what the developer reveals.
    """

    def __init__(
        self,
        num_shots: int = 10,
        num_clinics: int = 2,
        threshold: int = 4,
        target: float = 50.0,
        seed: int = 1234,
        vaccine_fraction: float = 0.5,
        binding_deadline: int = 100,
        extra_patients: int = 4,
    ):
        rng = Random(seed)
        self.rng = rng
        self.developer = KeyPair.generate(rng)
        self.clinics = [KeyPair.generate(rng) for _ in range(num_clinics)]
        self.patients = [KeyPair.generate(rng) for _ in range(num_shots + extra_patients)]
        self.outsider = KeyPair.generate(rng)
        n_vaccine = round(num_shots * vaccine_fraction)
        contents = [ShotContent.VACCINE] * n_vaccine
        contents += [ShotContent.PLACEBO] * (num_shots - n_vaccine)
        rng.shuffle(contents)
        self.openings: dict[bytes, Opening] = {}
        for content in contents:
            opening = Opening(content=content, nonce=generate_nonce(rng))
            self.openings[commit(opening)] = opening
        self.config = TrialConfig(
            num_participants=num_shots,
            infected_threshold=threshold,
            target_efficiency=target,
            clinics=tuple(k.address for k in self.clinics),
            developer=self.developer.address,
            binding_deadline=binding_deadline,
        )
        self.genesis = make_genesis(self.config, list(self.openings))
        self.ledger = Ledger(self.genesis)
        self.patient_shot: dict[int, bytes] = {}
        self.sick: list[int] = []

    # -- submissions -----------------------------------------------------

    def call(self, keypair: KeyPair, method: str, params: dict) -> Receipt:
        tx = make_transaction(
            keypair, method, params, self.ledger.next_sequence(keypair.address)
        )
        return self.ledger.submit(tx)

    def ok(self, keypair: KeyPair, method: str, params: dict) -> Receipt:
        receipt = self.call(keypair, method, params)
        assert receipt.accepted, (
            f"{method} unexpectedly rejected: {receipt.code} ({receipt.detail})"
        )
        return receipt

    def fail(self, keypair: KeyPair, method: str, params: dict, code: str) -> Receipt:
        before = self.ledger.state_digest()
        receipt = self.call(keypair, method, params)
        assert not receipt.accepted, f"{method} unexpectedly accepted"
        assert receipt.code == code, (
            f"expected {code}, got {receipt.code} ({receipt.detail})"
        )
        assert self.ledger.state_digest() == before, f"{method} rejection mutated state"
        return receipt

    # -- protocol steps ----------------------------------------------------

    def shot_list(self) -> list[bytes]:
        return list(self.openings)

    def assign_all(self) -> None:
        for i, shot in enumerate(self.openings):
            clinic = self.config.clinics[i % len(self.clinics)]
            self.ok(
                self.developer,
                "assign_shot_to_clinic",
                {"shot": shot.hex(), "clinic": clinic.hex()},
            )

    def begin(self, patient_index: int, clinic_index: int = 0):
        """Open a session with only the clinic committed; returns driving state."""
        rng = self.rng
        c1 = RandomContribution(value=rng.getrandbits(64), nonce=generate_nonce(rng))
        c2 = RandomContribution(value=rng.getrandbits(64), nonce=generate_nonce(rng))
        patient = self.patients[patient_index]
        receipt = self.ok(
            self.clinics[clinic_index],
            "begin_binding",
            {"patient": patient.address.hex(), "commitment": commit_contribution(c1).hex()},
        )
        session = receipt.events[0].payload["session"]
        return session, c1, c2

    def bind(
        self,
        patient_index: int,
        clinic_index: int = 0,
        r1: int | None = None,
        r2: int | None = None,
        confirm: bool = True,
    ) -> bytes:
        rng = self.rng
        clinic = self.clinics[clinic_index]
        patient = self.patients[patient_index]
        c1 = RandomContribution(
            value=rng.getrandbits(64) if r1 is None else r1, nonce=generate_nonce(rng)
        )
        c2 = RandomContribution(
            value=rng.getrandbits(64) if r2 is None else r2, nonce=generate_nonce(rng)
        )
        receipt = self.ok(
            clinic,
            "begin_binding",
            {"patient": patient.address.hex(), "commitment": commit_contribution(c1).hex()},
        )
        session = receipt.events[0].payload["session"]
        self.ok(
            patient,
            "patient_commit",
            {"session": session, "commitment": commit_contribution(c2).hex()},
        )
        self.ok(
            clinic,
            "clinic_reveal",
            {"session": session, "value": c1.value, "nonce": c1.nonce.hex()},
        )
        self.ok(
            patient,
            "patient_reveal",
            {"session": session, "value": c2.value, "nonce": c2.nonce.hex()},
        )
        shot_hex = self.ledger.query("patient_shot", {"patient": patient.address.hex()})
        shot = bytes.fromhex(shot_hex)
        if confirm:
            self.ok(patient, "confirm_binding", {"shot": shot_hex})
        self.patient_shot[patient_index] = shot
        return shot

    def bind_all(self, confirm: bool = True) -> None:
        for i in range(self.config.num_participants):
            self.bind(i, i % len(self.clinics), confirm=confirm)

    def arm(self, patient_index: int) -> ShotContent:
        return self.openings[self.patient_shot[patient_index]].content

    def sicken(self, patient_index: int) -> Receipt:
        receipt = self.ok(self.patients[patient_index], "report_sick", {})
        self.sick.append(patient_index)
        return receipt

    def sicken_exact(self, n_placebo: int, n_vaccine: int) -> None:
        """Make exactly these many bound patients sick, by true arm."""
        want = {ShotContent.PLACEBO: n_placebo, ShotContent.VACCINE: n_vaccine}
        for index in sorted(self.patient_shot):
            content = self.arm(index)
            if want[content] > 0:
                want[content] -= 1
                self.sicken(index)
        assert not any(want.values()), f"not enough bound patients per arm: {want}"

    def opening_entry(
        self, shot: bytes, content_label: str | None = None, nonce: bytes | None = None
    ) -> dict:
        opening = self.openings[shot]
        return {
            "commitment": shot.hex(),
            "nonce": (nonce if nonce is not None else opening.nonce).hex(),
            "content": content_label if content_label is not None else opening.content.label,
        }

    def sick_control_openings(self) -> list[dict]:
        shots = sorted(
            self.patient_shot[i]
            for i in self.sick
            if self.arm(i) is ShotContent.PLACEBO
        )
        return [self.opening_entry(shot) for shot in shots]

    def reveal_honest(self) -> Receipt:
        return self.ok(
            self.developer, "reveal_controls", {"openings": self.sick_control_openings()}
        )


_ACCEPTANCE_LINES: list[tuple[int, str]] = []


@pytest.fixture(scope="session")
def vectors():
    data = resources.files("vaccsc") / "data" / "commitment_vectors.json"
    return json.loads(data.read_text())


@pytest.fixture
def world_cls():
    return World


@pytest.fixture
def acceptance():
    """Record one pass/fail line per criterion; fails the test on FAIL."""

    def record(number: int, description: str, ok: bool, detail: str = ""):
        status = "PASS" if ok else "FAIL"
        line = f"[ACCEPTANCE {number}] {status} - {description}"
        if detail:
            line += f" ({detail})"
        _ACCEPTANCE_LINES.append((number, line))
        print(line)
        assert ok, line

    return record


@pytest.fixture
def timer():
    start = time.perf_counter()
    return lambda: time.perf_counter() - start


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for _, line in sorted(_ACCEPTANCE_LINES, key=lambda item: item[0]):
            terminalreporter.write_line(line)
