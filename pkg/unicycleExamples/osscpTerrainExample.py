#
# Copyright (C) 2026 osscp developers. See LICENSE file for terms.
#
from __future__ import print_function
from osscp.consensus import osscp_solve
from osscp.scenarios import build_scenario, homotopy_class
import matplotlib.pyplot as plt
import numpy as np

scenario = build_scenario("unicycle-terrain")

result = osscp_solve(scenario.problem, [guess for _, guess in scenario.guesses], scenario.osscp_config)

print("stopped after %d iterations (%s), consensus cost %.6f through the %s" % (
    result.iterations, result.reason, result.history[-1].cost, homotopy_class(result.zbar, scenario.obstacles)))

xs = np.linspace(-1.0, 11.0, 121)
ys = np.linspace(-7.0, 7.0, 141)
plt.subplot(1, 2, 1)
plt.contourf(xs, ys, scenario.terrain.sample(xs, ys), 20, cmap='RdBu_r')
for obstacle in scenario.obstacles:
    plt.gca().add_patch(plt.Circle(obstacle.center, obstacle.radius, color='black', alpha=0.5))
for agent in result.agent_history[-1]:
    plt.plot(agent.trajectory.states[:, 0], agent.trajectory.states[:, 1], '--', label="agent %d" % agent.id)
plt.plot(result.zbar.states[:, 0], result.zbar.states[:, 1], 'k', label="consensus")
plt.axis('equal')
plt.legend()

plt.subplot(1, 2, 2)
iterations = [state.iteration for state in result.history[1:]]
plt.semilogy(iterations, [max(state.primal_residuals) for state in result.history[1:]], label="primal")
plt.semilogy(iterations, [state.dual_residual for state in result.history[1:]], label="dual")
plt.xlabel('iteration')
plt.legend()
plt.show()
