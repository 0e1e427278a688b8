from . controller import (AgentController, MacState, InFlight, begin_action, advance_mac, consume_mac_tx_slot,
                          action_completes, finish_action)
from . qlearning import (RewardVector, AgentState, QLearningAgent, alpha, compute_cost, q_update, exploration_schedule,
                         convergence_detected, choose_action, secondary_slot_step, complete_secondary_action)
from . policies import PolicyVector, StationaryAgent, StationaryState, uniform_policy, silent_policy, stationary_executor
