#
# Copyright (C) 2026 osscp developers. See LICENSE file for terms.
#
from __future__ import print_function
from osscp.scenarios import build_scenario, homotopy_class
from osscp.scp import multi_start, final_trajectory
import matplotlib.pyplot as plt

scenario = build_scenario("unicycle-basic")

records = multi_start(scenario.problem, [guess for _, guess in scenario.guesses], scenario.scp_config)

for (name, guess), record in zip(scenario.guesses, records):
    trajectory = final_trajectory(record)
    print("%-10s cost %.6f after %d iterations (%s), ends in %s" % (
        name, record.final_cost, record.iterations, "converged" if record.converged else "not converged",
        homotopy_class(trajectory, scenario.obstacles)))
    plt.plot(guess.states[:, 0], guess.states[:, 1], ':', color='grey')
    plt.plot(trajectory.states[:, 0], trajectory.states[:, 1], label=name)

for obstacle in scenario.obstacles:
    plt.gca().add_patch(plt.Circle(obstacle.center, obstacle.radius, color='black', alpha=0.3))

plt.axis('equal')
plt.xlabel('x / m')
plt.ylabel('y / m')
plt.legend()
plt.show()
