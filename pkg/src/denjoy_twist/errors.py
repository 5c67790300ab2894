class ConstructionError(ValueError):
    """The requested table cannot be built with the given parameters."""


class OrbitBeyondTable(ConstructionError):
    """A map evaluation needed a gap outside the stored index range."""


class DomainError(ValueError):
    """Argument outside the domain of a Mobius-type slope map."""


class SeedInfeasible(ConstructionError):
    """The seeded one-sided slopes violate an ordering or balance constraint."""


class SurgeryInfeasible(ConstructionError):
    """No admissible ramp width was found for a half-gap."""
