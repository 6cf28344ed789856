"""Self-test command."""

import logging

from app.schemas.report import CommandResult
from app.services.selftest_service import SelfTestService
from .router import CommandContext, CommandRouter

logger = logging.getLogger('vortexlab_selftest_controller')

selftest_router = CommandRouter(tags="Selftest")


@selftest_router.command("selftest")
def selftest(context: CommandContext) -> CommandResult:
    """Every invariant check; failures are reported and turn into exit status 2."""
    checks = SelfTestService(context.resolution, context.seed, context.threads).run()
    failed = [check.name for check in checks if not check.passed]
    logger.info(f"[SelftestController] {len(checks) - len(failed)} of {len(checks)} checks passed")
    return CommandResult(
        results={"passed": not failed, "failed": failed, "checks": [check.to_dict() for check in checks]},
        tables={"checks": [check.to_dict() for check in checks]},
        violations=[f"invariant check {name} failed" for name in failed],
    )
