"""
Task routing configuration for trial dispatch.
"""

# Task routing rules for different queues
task_routes = {
    "tasks.experiments.*": {
        "queue": "experiments",
        "routing_key": "experiments"
    },

    # Default queue for unmatched tasks
    "*": {
        "queue": "experiments",
        "routing_key": "default"
    }
}

# Queue configurations
QUEUE_CONFIGS = {
    "experiments": {
        "routing_key": "experiments",
        "max_retries": 0,
    },
}
