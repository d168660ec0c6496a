import pytest
from hypothesis import HealthCheck, settings

from mackey_pic.groups import all_groups_up_to, make_group

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

SMALL_GROUPS = all_groups_up_to(16)
TWIST_GROUPS = {
    "C4": (4,),
    "C5": (5,),
    "C8": (8,),
    "C9": (9,),
    "C6": (6,),
    "Klein": (2, 2),
}


@pytest.fixture
def klein():
    return make_group([2, 2])


@pytest.fixture
def klein_twist(klein):
    from mackey_pic.twists import make_twist

    return make_twist(klein, (1, 3, 3, 3, 1))
