import numpy as np
import pytest

from picube import MomentSystem, build_seed, eliminate, parse_domain


class RuleMaker:
    """Session cache of eliminated rules; the expensive runs happen once."""

    def __init__(self):
        self._reports = {}

    def report(self, label: str, degree: int):
        key = (label, degree)
        if key not in self._reports:
            domain = parse_domain(label)
            seed = build_seed(domain, degree)
            system = MomentSystem(domain, degree)
            self._reports[key] = eliminate(system, seed)
        return self._reports[key]

    def eliminated(self, label: str, degree: int):
        return self.report(label, degree).final_rule

    def cached_rules(self):
        return {key: rep.final_rule for key, rep in self._reports.items()}


@pytest.fixture(scope="session")
def rules() -> RuleMaker:
    return RuleMaker()


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)
