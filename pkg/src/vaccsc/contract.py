"""The Phase III trial contract: a deterministic access-controlled state machine.

Lifecycle: the developer deploys the contract with one commitment per
shot, distributes shots to clinics, clinics bind shots to patients
through committed coin flips, patients report illness, and once the
infected threshold is reached the developer reveals which sick patients
received the control. Everyone else sick is counted as vaccinated by
elimination, the efficiency is computed, and the approval decision is
published. Shot contents stay sealed behind their commitments the whole
time, so neither clinics nor patients can tell vaccine from placebo
before the reveal.
"""

from __future__ import annotations

import json
from bisect import insort
from dataclasses import dataclass, field
from enum import Enum

from .coinflip import (
    CoinFlipSession,
    Party,
    RandomContribution,
    SessionError,
    U64_MAX,
    select_index,
)
from .commitment import DIGEST_SIZE, NONCE_SIZE, ShotContent, verify_raw_opening
from .keys import ADDRESS_SIZE

CONTRACT_ID = "vaccsc-1"

DEFAULT_BINDING_DEADLINE = 100


class ContractError(Exception):
    """A rejected contract call. The transaction leaves no trace on state."""

    def __init__(self, code: str, detail: str = ""):
        super().__init__(detail or code)
        self.code = code


class TrialPhase(Enum):
    DEPLOYED = "deployed"
    DISTRIBUTING = "distributing"
    ACTIVE = "active"
    REVEAL_PENDING = "reveal_pending"
    FINALIZED = "finalized"


class VaccineType(Enum):
    """Resolved arm of a shot; Unknown until the control reveal."""

    UNKNOWN = "unknown"
    PLACEBO = "placebo"
    VACCINE_BY_ELIMINATION = "vaccine_by_elimination"


@dataclass(frozen=True)
class TrialConfig:
    """Deployment parameters fixed for the lifetime of the trial."""

    num_participants: int
    infected_threshold: int
    target_efficiency: float
    clinics: tuple[bytes, ...]
    developer: bytes
    binding_deadline: int = DEFAULT_BINDING_DEADLINE

    def __post_init__(self) -> None:
        if self.num_participants < 1:
            raise ValueError("num_participants must be positive")
        if not 1 <= self.infected_threshold <= self.num_participants:
            raise ValueError("infected_threshold must be in [1, num_participants]")
        if not 0.0 <= self.target_efficiency <= 100.0:
            raise ValueError("target_efficiency must be a percentage in [0, 100]")
        if not self.clinics:
            raise ValueError("at least one clinic is required")
        if len(set(self.clinics)) != len(self.clinics):
            raise ValueError("clinic addresses must be distinct")
        if any(len(c) != ADDRESS_SIZE for c in self.clinics):
            raise ValueError("clinic addresses must be 20 bytes")
        if len(self.developer) != ADDRESS_SIZE:
            raise ValueError("developer address must be 20 bytes")
        if self.developer in self.clinics:
            raise ValueError("developer cannot also be a clinic")
        if self.binding_deadline < 0:
            raise ValueError("binding_deadline must be non-negative")

    def to_dict(self) -> dict:
        return {
            "num_participants": self.num_participants,
            "infected_threshold": self.infected_threshold,
            "target_efficiency": self.target_efficiency,
            "clinics": [c.hex() for c in self.clinics],
            "developer": self.developer.hex(),
            "binding_deadline": self.binding_deadline,
        }

    @classmethod
    def from_dict(cls, raw: dict) -> "TrialConfig":
        return cls(
            num_participants=int(raw["num_participants"]),
            infected_threshold=int(raw["infected_threshold"]),
            target_efficiency=float(raw["target_efficiency"]),
            clinics=tuple(bytes.fromhex(c) for c in raw["clinics"]),
            developer=bytes.fromhex(raw["developer"]),
            binding_deadline=int(raw.get("binding_deadline", DEFAULT_BINDING_DEADLINE)),
        )


@dataclass
class ShotRecord:
    """Per-shot row. Every field is set at most once, in lifecycle order."""

    commit: bytes
    clinic: bytes | None = None
    patient: bytes | None = None
    got_sick: bool = False
    vaccine_type: VaccineType = VaccineType.UNKNOWN
    patient_confirmed: bool = False
    session: CoinFlipSession | None = None

    def to_dict(self) -> dict:
        return {
            "commit": self.commit.hex(),
            "clinic": self.clinic.hex() if self.clinic else None,
            "patient": self.patient.hex() if self.patient else None,
            "got_sick": self.got_sick,
            "vaccine_type": self.vaccine_type.value,
            "patient_confirmed": self.patient_confirmed,
            "session": self.session.to_dict() if self.session else None,
        }


@dataclass(frozen=True)
class TrialOutcome:
    """Finalized counts and the approval decision derived from them."""

    ar0: int  # infected control recipients (revealed)
    ar1: int  # infected vaccine recipients (by elimination)
    efficiency: float | None  # signed percentage; None when ar0 = 0
    approved: bool

    def to_dict(self) -> dict:
        return {
            "ar0": self.ar0,
            "ar1": self.ar1,
            "efficiency": self.efficiency,
            "approved": self.approved,
        }


def efficiency_percent(ar0: int, ar1: int) -> float | None:
    """Percent risk reduction in the vaccinated arm: 100 * (ar0 - ar1) / ar0.

    Undefined (None) when no control infections were recorded. May be
    negative when the vaccinated arm fared worse than control.
    """
    if ar0 == 0:
        return None
    return 100.0 * (ar0 - ar1) / ar0


def risk_ratio_percent(ar0: int, ar1: int) -> float | None:
    """Vaccinated-to-control infection ratio as a percentage: 100 * ar1 / ar0.

    Secondary transparency view; None when ar0 = 0.
    """
    if ar0 == 0:
        return None
    return 100.0 * ar1 / ar0


def decide_outcome(ar0: int, ar1: int, target_efficiency: float) -> TrialOutcome:
    eff = efficiency_percent(ar0, ar1)
    approved = eff is not None and eff >= target_efficiency
    return TrialOutcome(ar0=ar0, ar1=ar1, efficiency=eff, approved=approved)


@dataclass
class BindingSession:
    """A pending clinic/patient coin flip, not yet attached to a shot."""

    session_id: int
    clinic: bytes
    patient: bytes
    flip: CoinFlipSession
    shot: bytes | None = None

    def to_dict(self) -> dict:
        d = self.flip.to_dict()
        d.update(
            {
                "session_id": self.session_id,
                "clinic": self.clinic.hex(),
                "patient": self.patient.hex(),
                "shot": self.shot.hex() if self.shot else None,
            }
        )
        return d


class VaccineTrial:
    """Contract instance. All mutation goes through ``dispatch``."""

    METHODS = frozenset(
        {
            "assign_shot_to_clinic",
            "begin_binding",
            "patient_commit",
            "clinic_reveal",
            "patient_reveal",
            "confirm_binding",
            "report_sick",
            "reveal_controls",
            "abort_binding",
        }
    )

    def __init__(self, config: TrialConfig, commitments: list[bytes]):
        if len(commitments) != config.num_participants:
            raise ValueError(
                f"expected {config.num_participants} commitments, got {len(commitments)}"
            )
        if any(len(c) != DIGEST_SIZE for c in commitments):
            raise ValueError("every commitment must be a 32-byte digest")
        if len(set(commitments)) != len(commitments):
            raise ValueError("commitments must be pairwise distinct")
        self.config = config
        self.shots: dict[bytes, ShotRecord] = {c: ShotRecord(commit=c) for c in commitments}
        self.phase = TrialPhase.DEPLOYED
        self.infected = 0
        self.outcome: TrialOutcome | None = None
        self.unassigned = len(commitments)
        # free_shots: per clinic, patient-less shots sorted by digest. This
        # sorted order is the canonical order the coin flip indexes into.
        self.free_shots: dict[bytes, list[bytes]] = {c: [] for c in config.clinics}
        self.sessions: dict[int, BindingSession] = {}
        self.pending_by_patient: dict[bytes, int] = {}
        self.patient_shot: dict[bytes, bytes] = {}
        self.next_session_id = 0

    # -- genesis -----------------------------------------------------------

    @classmethod
    def from_genesis(cls, genesis: dict) -> "VaccineTrial":
        if genesis.get("contract") != CONTRACT_ID:
            raise ValueError(f"unsupported contract id {genesis.get('contract')!r}")
        params = genesis["params"]
        config = TrialConfig.from_dict(params["config"])
        if bytes.fromhex(genesis["deployer"]) != config.developer:
            raise ValueError("genesis deployer does not match the configured developer")
        commitments = [bytes.fromhex(c) for c in params["commitments"]]
        return cls(config, commitments)

    def genesis_dict(self) -> dict:
        return {
            "contract": CONTRACT_ID,
            "deployer": self.config.developer.hex(),
            "params": {
                "config": self.config.to_dict(),
                "commitments": [c.hex() for c in self.shots],
            },
        }

    # -- dispatch ----------------------------------------------------------

    def dispatch(self, sender: bytes, method: str, params: dict, tick: int) -> list[tuple[str, dict]]:
        """Apply one call; returns emitted events or raises ContractError.

        Handlers validate everything before touching state so a raised
        ContractError always leaves the contract exactly as it was.
        """
        handler = _HANDLERS.get(method)
        if handler is None:
            raise ContractError("UnknownMethod", f"no such method {method!r}")
        return handler(self, sender, params, tick)

    # -- operations --------------------------------------------------------

    def _assign_shot(self, sender: bytes, params: dict, tick: int) -> list[tuple[str, dict]]:
        if self.phase not in (TrialPhase.DEPLOYED, TrialPhase.DISTRIBUTING):
            raise ContractError("WrongPhase", "distribution is closed")
        if sender != self.config.developer:
            raise ContractError("NotDeveloper", "only the developer distributes shots")
        shot = _digest_param(params, "shot")
        clinic = _address_param(params, "clinic")
        record = self.shots.get(shot)
        if record is None:
            raise ContractError("UnknownShot", "no such shot commitment")
        if record.clinic is not None:
            raise ContractError("AlreadyAssigned", "shot already has a clinic")
        if clinic not in self.free_shots:
            raise ContractError("UnknownClinic", "address is not a registered clinic")
        record.clinic = clinic
        insort(self.free_shots[clinic], shot)
        self.unassigned -= 1
        self.phase = TrialPhase.ACTIVE if self.unassigned == 0 else TrialPhase.DISTRIBUTING
        return [("ShotAssigned", {"shot": shot.hex(), "clinic": clinic.hex()})]

    def _begin_binding(self, sender: bytes, params: dict, tick: int) -> list[tuple[str, dict]]:
        if self.phase is not TrialPhase.ACTIVE:
            raise ContractError("WrongPhase", "binding requires an active trial")
        if sender not in self.free_shots:
            raise ContractError("NotClinic", "only clinics start bindings")
        patient = _address_param(params, "patient")
        clinic_commit = _digest_param(params, "commitment")
        if patient in self.patient_shot or patient in self.pending_by_patient:
            raise ContractError("PatientAlreadyBound", "patient already has a shot or session")
        if not self.free_shots[sender]:
            raise ContractError("NoShotsAvailable", "clinic has no unassigned shots")
        flip = CoinFlipSession(deadline=tick + self.config.binding_deadline)
        flip.add_commit(Party.A, clinic_commit)
        session_id = self.next_session_id
        self.next_session_id += 1
        self.sessions[session_id] = BindingSession(
            session_id=session_id, clinic=sender, patient=patient, flip=flip
        )
        self.pending_by_patient[patient] = session_id
        return [
            (
                "BindingStarted",
                {"session": session_id, "clinic": sender.hex(), "patient": patient.hex()},
            )
        ]

    def _patient_commit(self, sender: bytes, params: dict, tick: int) -> list[tuple[str, dict]]:
        session = self._active_session(params)
        if sender != session.patient:
            raise ContractError("NotSessionPatient", "caller is not this session's patient")
        commitment = _digest_param(params, "commitment")
        _session_op(session.flip.add_commit, Party.B, commitment)
        return []

    def _clinic_reveal(self, sender: bytes, params: dict, tick: int) -> list[tuple[str, dict]]:
        session = self._active_session(params)
        if sender != session.clinic:
            raise ContractError("NotSessionClinic", "caller is not this session's clinic")
        return self._apply_reveal(session, Party.A, params)

    def _patient_reveal(self, sender: bytes, params: dict, tick: int) -> list[tuple[str, dict]]:
        session = self._active_session(params)
        if sender != session.patient:
            raise ContractError("NotSessionPatient", "caller is not this session's patient")
        return self._apply_reveal(session, Party.B, params)

    def _apply_reveal(
        self, session: BindingSession, party: Party, params: dict
    ) -> list[tuple[str, dict]]:
        contribution = _contribution_param(params)
        # When this reveal completes the flip the shot is selected in the
        # same call, so the free list must be checked before mutating the
        # session; otherwise a failed selection would leave a half-applied
        # reveal behind.
        free = self.free_shots[session.clinic]
        if session.flip.will_complete(party) and not free:
            raise ContractError("NoShotsAvailable", "clinic ran out of shots before completion")
        _session_op(session.flip.add_reveal, party, contribution)
        if session.flip.result is not None:
            index = select_index(session.flip.result, len(free))
            shot = free.pop(index)
            record = self.shots[shot]
            record.patient = session.patient
            record.session = session.flip
            session.shot = shot
            self.patient_shot[session.patient] = shot
            del self.pending_by_patient[session.patient]
        return []

    def _confirm_binding(self, sender: bytes, params: dict, tick: int) -> list[tuple[str, dict]]:
        if self.phase is not TrialPhase.ACTIVE:
            raise ContractError("WrongPhase", "confirmation requires an active trial")
        shot = _digest_param(params, "shot")
        record = self.shots.get(shot)
        if record is None:
            raise ContractError("UnknownShot", "no such shot commitment")
        if record.patient != sender:
            raise ContractError("NotProvisionalPatient", "caller is not this shot's patient")
        if record.patient_confirmed:
            raise ContractError("AlreadyConfirmed", "binding already confirmed")
        record.patient_confirmed = True
        return [("BindingConfirmed", {"shot": shot.hex(), "patient": sender.hex()})]

    def _report_sick(self, sender: bytes, params: dict, tick: int) -> list[tuple[str, dict]]:
        if self.phase is not TrialPhase.ACTIVE:
            raise ContractError("TrialNotActive", "sickness reports are closed")
        shot = self.patient_shot.get(sender)
        record = self.shots.get(shot) if shot else None
        if record is None or not record.patient_confirmed:
            raise ContractError("NotBoundPatient", "caller has no confirmed shot")
        if record.got_sick:
            raise ContractError("AlreadySick", "sickness already reported")
        record.got_sick = True
        self.infected += 1
        events = [("PatientSick", {"patient": sender.hex(), "infected": self.infected})]
        if self.infected == self.config.infected_threshold:
            self.phase = TrialPhase.REVEAL_PENDING
            events.append(("TrialFinished", {"infected": self.infected}))
        return events

    def _reveal_controls(self, sender: bytes, params: dict, tick: int) -> list[tuple[str, dict]]:
        if self.phase is not TrialPhase.REVEAL_PENDING:
            raise ContractError("NotRevealPhase", "reveal requires the infected threshold")
        if sender != self.config.developer:
            raise ContractError("NotDeveloper", "only the developer reveals controls")
        openings = params.get("openings")
        if not isinstance(openings, list):
            raise ContractError("MalformedParams", "openings must be a list")
        # Validate the whole batch before mutating anything: one bad entry
        # rejects the entire call.
        revealed: set[bytes] = set()
        for entry in openings:
            if not isinstance(entry, dict):
                raise ContractError("MalformedParams", "each opening must be an object")
            shot = _digest_param(entry, "commitment")
            record = self.shots.get(shot)
            if record is None or not record.got_sick:
                raise ContractError("NotSickShot", f"{shot.hex()} is not a sick shot")
            nonce = _hex_param(entry, "nonce")
            try:
                content = ShotContent.from_name(str(entry.get("content", "")))
            except ValueError:
                raise ContractError("BadOpening", "unknown content label") from None
            if not verify_raw_opening(shot, nonce, content.value):
                raise ContractError("BadOpening", f"opening does not match {shot.hex()}")
            if content is not ShotContent.PLACEBO:
                raise ContractError("NotPlacebo", f"{shot.hex()} is not a control shot")
            revealed.add(shot)
        for shot in revealed:
            self.shots[shot].vaccine_type = VaccineType.PLACEBO
        for record in self.shots.values():
            if record.got_sick and record.vaccine_type is VaccineType.UNKNOWN:
                record.vaccine_type = VaccineType.VACCINE_BY_ELIMINATION
        ar0 = len(revealed)
        ar1 = self.infected - ar0
        self.outcome = decide_outcome(ar0, ar1, self.config.target_efficiency)
        self.phase = TrialPhase.FINALIZED
        return [
            (
                "TrialFinalized",
                {
                    "ar0": ar0,
                    "ar1": ar1,
                    "efficiency": self.outcome.efficiency,
                    "approved": self.outcome.approved,
                },
            )
        ]

    def _abort_binding(self, sender: bytes, params: dict, tick: int) -> list[tuple[str, dict]]:
        session = self._active_session(params)
        if sender not in (session.clinic, session.patient):
            raise ContractError("NotSessionParty", "caller is not part of this session")
        _session_op(session.flip.abort, tick)
        del self.pending_by_patient[session.patient]
        return []

    def _active_session(self, params: dict) -> BindingSession:
        if self.phase is not TrialPhase.ACTIVE:
            raise ContractError("WrongPhase", "session operations require an active trial")
        raw = params.get("session")
        if not isinstance(raw, int):
            raise ContractError("MalformedParams", "session id must be an integer")
        session = self.sessions.get(raw)
        if session is None:
            raise ContractError("UnknownSession", f"no session {raw}")
        if session.shot is not None or session.flip.result is not None:
            raise ContractError("SessionSettled", "session already selected a shot")
        if session.flip.phase.value == "aborted":
            raise ContractError("SessionSettled", "session was aborted")
        return session

    # -- views -------------------------------------------------------------

    def view(self, name: str, params: dict | None = None) -> object:
        params = params or {}
        if name == "phase":
            return self.phase.value
        if name == "infected_count":
            return self.infected
        if name == "vaccine_status":
            if self.outcome is None:
                return "Pending"
            return "Approved" if self.outcome.approved else "Rejected"
        if name == "efficiency":
            return self.outcome.efficiency if self.outcome else None
        if name == "risk_ratio":
            if self.outcome is None:
                return None
            return risk_ratio_percent(self.outcome.ar0, self.outcome.ar1)
        if name == "outcome":
            return self.outcome.to_dict() if self.outcome else None
        if name == "config":
            return self.config.to_dict()
        if name == "shot":
            record = self.shots.get(_digest_param(params, "commitment"))
            if record is None:
                raise ContractError("UnknownShot", "no such shot commitment")
            return record.to_dict()
        if name == "patient_shot":
            shot = self.patient_shot.get(_address_param(params, "patient"))
            return shot.hex() if shot else None
        if name == "session":
            session = self.sessions.get(params.get("session", -1))
            if session is None:
                raise ContractError("UnknownSession", "no such session")
            return session.to_dict()
        if name == "shots_available":
            clinic = _address_param(params, "clinic")
            if clinic not in self.free_shots:
                raise ContractError("UnknownClinic", "address is not a registered clinic")
            return len(self.free_shots[clinic])
        raise ContractError("UnknownView", f"no view named {name!r}")

    # -- canonical state ---------------------------------------------------

    def state_dict(self) -> dict:
        return {
            "contract": CONTRACT_ID,
            "phase": self.phase.value,
            "config": self.config.to_dict(),
            "shots": {c.hex(): r.to_dict() for c, r in self.shots.items()},
            "patients": {a.hex(): s.hex() for a, s in self.patient_shot.items()},
            "pending": {a.hex(): sid for a, sid in self.pending_by_patient.items()},
            "sessions": {str(sid): s.to_dict() for sid, s in self.sessions.items()},
            "infected": self.infected,
            "outcome": self.outcome.to_dict() if self.outcome else None,
            "next_session_id": self.next_session_id,
        }

    def canonical_state(self) -> bytes:
        """Deterministic byte form of the full state, for digests and replay."""
        return json.dumps(self.state_dict(), sort_keys=True, separators=(",", ":")).encode()


def _session_op(op, *args) -> None:
    try:
        op(*args)
    except SessionError as exc:
        raise ContractError(exc.code, str(exc)) from None


def _hex_param(params: dict, key: str) -> bytes:
    raw = params.get(key)
    if not isinstance(raw, str):
        raise ContractError("MalformedParams", f"{key} must be a hex string")
    try:
        return bytes.fromhex(raw)
    except ValueError:
        raise ContractError("MalformedParams", f"{key} is not valid hex") from None


def _digest_param(params: dict, key: str) -> bytes:
    value = _hex_param(params, key)
    if len(value) != DIGEST_SIZE:
        raise ContractError("MalformedParams", f"{key} must be 32 bytes")
    return value


def _address_param(params: dict, key: str) -> bytes:
    value = _hex_param(params, key)
    if len(value) != ADDRESS_SIZE:
        raise ContractError("MalformedParams", f"{key} must be a 20-byte address")
    return value


def _contribution_param(params: dict) -> RandomContribution:
    value = params.get("value")
    if not isinstance(value, int) or not 0 <= value <= U64_MAX:
        raise ContractError("MalformedParams", "value must be an unsigned 64-bit integer")
    nonce = _hex_param(params, "nonce")
    if len(nonce) != NONCE_SIZE:
        raise ContractError("MalformedParams", "nonce must be 32 bytes")
    return RandomContribution(value=value, nonce=nonce)


_HANDLERS = {
    "assign_shot_to_clinic": VaccineTrial._assign_shot,
    "begin_binding": VaccineTrial._begin_binding,
    "patient_commit": VaccineTrial._patient_commit,
    "clinic_reveal": VaccineTrial._clinic_reveal,
    "patient_reveal": VaccineTrial._patient_reveal,
    "confirm_binding": VaccineTrial._confirm_binding,
    "report_sick": VaccineTrial._report_sick,
    "reveal_controls": VaccineTrial._reveal_controls,
    "abort_binding": VaccineTrial._abort_binding,
}
